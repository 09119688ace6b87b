#include "giftrl/scalar_math.hpp"

#include <cmath>
#include <limits>

namespace giftrl {

namespace {
constexpr int kHalleyCap = 50;
constexpr double kWTol = 1e-12;
}  // namespace

double lambert_w(double x) {
  const double branch_point = -std::exp(-1.0);
  if (std::isnan(x)) throw std::domain_error("lambert_w: nan input");
  if (x < branch_point * (1.0 + 1e-14) - 1e-300)
    throw std::domain_error("lambert_w: x < -1/e");
  if (x == 0.0) return 0.0;

  // Initial guess per region.
  double w;
  if (x < branch_point + 1e-5) {
    // Series around the branch point in p = sqrt(2(ex+1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0)));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x > std::exp(1.0)) {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  } else if (x > 0.0) {
    w = x / (1.0 + x);  // crude but inside the basin
  } else {
    w = x * std::exp(1.0) / (1.0 + std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0))));
    if (!std::isfinite(w)) w = -0.5;
  }

  // Halley iterations on f(w) = w e^w - x.
  for (int i = 0; i < kHalleyCap; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0) break;
    const double dw = f / denom;
    w -= dw;
    if (w < -1.0) w = -1.0;
    if (std::abs(dw) <= kWTol * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double ln_lambert_w_exp(double a) {
  if (!std::isfinite(a)) throw std::domain_error("ln_lambert_w_exp: non-finite input");
  // Solve v + e^v = a. Monotone increasing, convex in v.
  double v;
  if (a > 3.0) {
    // e^v dominates: v ~ ln(a - ln a).
    v = std::log(a - std::log(a));
  } else if (a < -3.0) {
    // v dominates: v ~ a - e^a.
    v = a - std::exp(a);
  } else {
    v = 0.2 * a;  // smooth middle region
  }
  for (int i = 0; i < kHalleyCap; ++i) {
    const double ev = std::exp(v);
    const double f = v + ev - a;
    const double dv = f / (1.0 + ev);
    v -= dv;
    if (std::abs(dv) <= 1e-15 * std::max(1.0, std::abs(v))) break;
  }
  return v;
}

double lambert_w_exp(double a) {
  if (!std::isfinite(a)) throw std::domain_error("lambert_w_exp: non-finite input");
  // Small-w regime: residual is better controlled in w-space.
  if (a <= 0.0) return lambert_w(std::exp(a));
  const double v = ln_lambert_w_exp(a);
  return a - v;  // e^v = a - v exactly at the solution
}

double solve_1d(const std::function<double(double)>& f, Bracket bracket,
                double tol) {
  double lo = bracket.lo, hi = bracket.hi;
  if (!(lo < hi)) throw std::invalid_argument("solve_1d: empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("solve_1d: no sign change on bracket");

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    // Secant proposal, accepted only if it stays inside and makes progress.
    double cand = hi - fhi * (hi - lo) / (fhi - flo);
    if (!std::isfinite(cand) || cand <= lo || cand >= hi)
      cand = 0.5 * (lo + hi);
    x = cand;
    const double fx = f(x);
    if (std::abs(fx) <= tol || (hi - lo) <= tol) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // Force bisection whenever the secant stalls on one side.
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (std::abs(fmid) <= tol || (hi - lo) <= tol) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  throw std::runtime_error("solve_1d: no convergence in 200 iterations");
}

double integrate_ode(const std::function<double(double, double)>& rhs,
                     double h_end, double step,
                     const std::function<void(double, double)>& observe) {
  if (!(step > 0.0)) throw std::invalid_argument("integrate_ode: step must be > 0");
  double s = 0.0;
  double h = 0.0;
  if (observe) observe(h, s);
  auto eval = [&](double hh, double ss) {
    const double v = rhs(hh, ss);
    if (!std::isfinite(v))
      throw std::runtime_error("integrate_ode: non-finite rhs at h=" + std::to_string(hh));
    return v;
  };
  while (h < h_end) {
    const double dt = std::min(step, h_end - h);
    if (h + dt == h) break;  // residual interval below the ulp of h
    const double k1 = eval(h, s);
    const double k2 = eval(h + 0.5 * dt, s + 0.5 * dt * k1);
    const double k3 = eval(h + 0.5 * dt, s + 0.5 * dt * k2);
    const double k4 = eval(h + dt, s + dt * k3);
    s += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    h += dt;
    if (observe) observe(h, s);
  }
  return s;
}

double integrate_ode(const std::function<double(double, double)>& rhs,
                     double h_end, double step) {
  return integrate_ode(rhs, h_end, step, nullptr);
}

double maximize_1d(const std::function<double(double)>& f, double lo,
                   double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace giftrl
