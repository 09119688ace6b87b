#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "giftrl/scalar_math.hpp"

using namespace giftrl;

namespace {

// Independent oracle: plain bisection on w*e^w - x, no shared code with
// the implementation under test.
double lambert_bisect(double x, double lo, double hi) {
  auto f = [&](double w) { return w * std::exp(w) - x; };
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0) == (f(lo) > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lambert_w known points") {
  CHECK(lambert_w(0.0) == 0.0);
  CHECK(lambert_w(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // W(1): bisection oracle on w*e^w - 1 gives 0.5671432904097838.
  const double omega = lambert_bisect(1.0, 0.0, 1.0);
  CHECK(omega == doctest::Approx(0.5671432904097838).epsilon(1e-13));
  CHECK(lambert_w(1.0) == doctest::Approx(omega).epsilon(1e-13));
}

TEST_CASE("lambert_w residual over log-spaced grid") {
  const double lo = -std::exp(-1.0) + 1e-6;
  // Negative part of the branch plus a log sweep of the positive axis.
  for (double x = lo; x < 0.0; x /= 2.0) {
    const double w = lambert_w(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-10 * std::max(1.0, std::abs(x)));
  }
  for (double x = 1e-8; x <= 1e6; x *= 3.0) {
    const double w = lambert_w(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-10 * std::max(1.0, x));
  }
}

TEST_CASE("lambert_w domain error") {
  CHECK_THROWS_AS(lambert_w(-1.0), std::domain_error);
  CHECK_THROWS_AS(lambert_w(-0.5), std::domain_error);
}

TEST_CASE("lambert_w_exp known points and log-domain residual") {
  CHECK(lambert_w_exp(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lambert_w_exp(0.0) == doctest::Approx(0.5671432904097838).epsilon(1e-13));
  // a = 700 would overflow e^a; check the defining residual directly.
  const double w = lambert_w_exp(700.0);
  CHECK(std::abs(w + std::log(w) - 700.0) <= 1e-10);
}

TEST_CASE("lambert_w_exp agrees with lambert_w for moderate arguments") {
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double direct = lambert_w(std::exp(a));
    const double logdom = lambert_w_exp(a);
    CHECK(std::abs(direct - logdom) <= 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("solve_1d roots") {
  CHECK(solve_1d([](double s) { return s - 2.0; }, {0.0, 5.0}, 1e-10) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(solve_1d([](double s) { return s * s * s - 1.0; }, {0.0, 2.0}, 1e-10) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Stationary point of s^2/2 + e^{-s}: root of s - e^{-s}, the same
  // omega constant as W(1).
  const double s = solve_1d([](double x) { return x - std::exp(-x); },
                            {0.0, 2.0}, 1e-12);
  CHECK(s == doctest::Approx(0.5671432904097838).epsilon(1e-10));
}

TEST_CASE("solve_1d error paths") {
  CHECK_THROWS_AS(
      solve_1d([](double s) { return s * s + 1.0; }, {0.0, 1.0}, 1e-10),
      std::invalid_argument);
  CHECK_THROWS_AS(solve_1d([](double s) { return s; }, {3.0, 1.0}, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("integrate_ode trivial and constant rhs") {
  CHECK(integrate_ode([](double, double) { return 0.0; }, 1.0, 1e-3) == 0.0);
  CHECK(integrate_ode([](double, double) { return 2.5; }, 1.0, 1e-3) ==
        doctest::Approx(2.5).epsilon(1e-12));
  CHECK(integrate_ode([](double, double) { return 2.5; }, 0.3, 1e-3) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("integrate_ode linear rhs matches analytic solution") {
  // s' = 1 - s, s(0) = 0  ->  s(1) = 1 - e^{-1}.
  const double got =
      integrate_ode([](double, double s) { return 1.0 - s; }, 1.0, 1e-4);
  CHECK(std::abs(got - (1.0 - std::exp(-1.0))) <= 1e-8);

  // s' = a - b s with a = 3, b = 2: s(h) = (a/b)(1 - e^{-bh}).
  const double got2 =
      integrate_ode([](double, double s) { return 3.0 - 2.0 * s; }, 1.0, 1e-4);
  CHECK(std::abs(got2 - 1.5 * (1.0 - std::exp(-2.0))) <= 1e-8);
}

TEST_CASE("integrate_ode rejects non-finite rhs") {
  CHECK_THROWS_AS(integrate_ode(
                      [](double, double) {
                        return std::numeric_limits<double>::quiet_NaN();
                      },
                      1.0, 1e-2),
                  std::runtime_error);
}

TEST_CASE("integrate_ode observer sees endpoints") {
  int calls = 0;
  double last_h = -1.0;
  integrate_ode([](double, double) { return 1.0; }, 1.0, 0.25,
                [&](double h, double) {
                  ++calls;
                  last_h = h;
                });
  CHECK(calls == 5);  // h = 0, .25, .5, .75, 1
  CHECK(last_h == doctest::Approx(1.0));
}
