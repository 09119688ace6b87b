#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "giftrl/iwa.hpp"
#include "giftrl/rng.hpp"
#include "giftrl/surrogate.hpp"

using namespace giftrl;

namespace {

// Instance with x = theta/lambda (the setting of the per-round guarantees).
SurrogateInstance make_instance(const ScalarLoss& l, double p, double q2,
                                double lambda, double ortho2 = 0.0) {
  SurrogateInstance inst;
  inst.loss = l;
  inst.p = p;
  inst.qnorm2 = q2;
  inst.lambda_next = lambda;
  inst.theta_dot_q = lambda * p;
  inst.norm_theta2 = lambda * p * lambda * p / q2 + ortho2;
  return inst;
}

ScalarLoss random_scalar_loss(LossFamily f, Rng& rng) {
  const double h = rng.log_uniform(0.1, 10.0);
  switch (f) {
    case LossFamily::Squared:
      return {f, rng.uniform(-2.0, 2.0), h};
    case LossFamily::Logistic:
    case LossFamily::Exponential:
      return {f, rng.next_below(2) ? 1.0 : -1.0, h};
    case LossFamily::Logarithmic:
      return {f, static_cast<double>(rng.next_below(2)), h};
  }
  throw std::logic_error("random_scalar_loss");
}

SurrogateInstance random_instance(LossFamily f, Rng& rng) {
  const ScalarLoss l = random_scalar_loss(f, rng);
  const double p = f == LossFamily::Logarithmic ? rng.uniform(0.05, 0.95)
                                                : rng.uniform(-3.0, 3.0);
  return make_instance(l, p, rng.log_uniform(0.1, 10.0),
                       rng.log_uniform(0.1, 10.0), rng.uniform(0.0, 25.0));
}

// Independent minimizer oracle: coarse grid + refinement, never touching
// prox_coeff's stationarity path.
double grid_min_H(const SurrogateInstance& inst, double lo, double hi) {
  double best_s = lo, best = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 8; ++pass) {
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
      const double s = lo + (hi - lo) * i / n;
      const double v = eval_H(inst, s);
      if (v < best) {
        best = v;
        best_s = s;
      }
    }
    const double w = (hi - lo) / n;
    lo = best_s - 2.0 * w;
    hi = best_s + 2.0 * w;
  }
  return best_s;
}

}  // namespace

TEST_CASE("eval_H at fixed points") {
  // theta = 0, s = 0: just conj(0).
  const auto sq = make_instance(ScalarLoss(LossFamily::Squared, 0.0), 0.0, 1.0, 1.0);
  CHECK(eval_H(sq, 0.0) == 0.0);
  // Squared y=0 h=1, theta=0, q=[1], lambda=1, s=1: 1/2 + 1/2.
  CHECK(eval_H(sq, 1.0) == doctest::Approx(1.0));
  // Outside the conjugate domain: +inf sentinel.
  const auto lg =
      make_instance(ScalarLoss(LossFamily::Logistic, 1.0), 0.0, 1.0, 1.0);
  CHECK(eval_H(lg, 0.5) == kPlusInf);
  CHECK(eval_H(lg, -1.5) == kPlusInf);
}

TEST_CASE("eval_H_diff equals the difference of eval_H") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto inst = random_instance(LossFamily::Squared, rng);
    const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    CHECK(eval_H_diff(inst, a, b) ==
          doctest::Approx(eval_H(inst, a) - eval_H(inst, b)).epsilon(1e-9));
  }
}

TEST_CASE("Fenchel-Young equality inside eval_H's conjugate term") {
  Rng rng(6);
  for (const LossFamily f : {LossFamily::Squared, LossFamily::Logistic,
                             LossFamily::Exponential, LossFamily::Logarithmic}) {
    for (int i = 0; i < 50; ++i) {
      const auto inst = random_instance(f, rng);
      const double g = inst.loss.d1(inst.p);
      // conj(g) = g*p - value(p) at the subgradient.
      CHECK(inst.loss.conjugate(g) ==
            doctest::Approx(g * inst.p - inst.loss.value(inst.p)).epsilon(1e-9));
    }
  }
}

TEST_CASE("prox coefficient: fixed examples") {
  // g = 0 (squared with p = y): prox stays at zero.
  const auto at_min =
      make_instance(ScalarLoss(LossFamily::Squared, 0.0), 0.0, 1.0, 1.0);
  CHECK(choose_surrogate(Strategy::Proximal, at_min).coeff == 0.0);

  // theta=[2], q=[1], lambda=1, squared y=0 h=1: argmin (2-s)^2/2 + s^2/2 = 1.
  SurrogateInstance inst;
  inst.loss = ScalarLoss(LossFamily::Squared, 0.0);
  inst.p = 2.0;
  inst.theta_dot_q = 2.0;
  inst.norm_theta2 = 4.0;
  inst.qnorm2 = 1.0;
  inst.lambda_next = 1.0;
  CHECK(prox_coeff(inst) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(grid_min_H(inst, -8.0, 8.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("squared prox closed form vs grid search") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto inst = random_instance(LossFamily::Squared, rng);
    const double pbar = inst.theta_dot_q / inst.lambda_next;
    const double closed = (pbar - inst.loss.label) /
                          (1.0 / inst.loss.weight + inst.qnorm2 / inst.lambda_next);
    CHECK(prox_coeff(inst) == doctest::Approx(closed).epsilon(1e-9));
    const double span = 2.0 * (std::abs(closed) + 1.0);
    CHECK(std::abs(grid_min_H(inst, closed - span, closed + span) - closed) <=
          1e-6 * std::max(1.0, std::abs(closed)));
  }
}

TEST_CASE("prox minimizes H against sampled alternatives") {
  Rng rng(8);
  for (const LossFamily f : {LossFamily::Squared, LossFamily::Logistic,
                             LossFamily::Exponential, LossFamily::Logarithmic}) {
    for (int i = 0; i < 25; ++i) {
      const auto inst = random_instance(f, rng);
      const double star = prox_coeff(inst);
      const double h_star = eval_H(inst, star);
      for (int j = 0; j < 1000; ++j) {
        const double s = star + rng.uniform(-5.0, 5.0);
        const double h_s = eval_H(inst, s);
        if (std::isfinite(h_s)) CHECK(h_star <= h_s + 1e-9);
      }
    }
  }
}

TEST_CASE("prox is the implicit-update fixed point") {
  Rng rng(9);
  for (const LossFamily f :
       {LossFamily::Squared, LossFamily::Logistic, LossFamily::Exponential}) {
    for (int i = 0; i < 50; ++i) {
      const auto inst = random_instance(f, rng);
      const double star = prox_coeff(inst);
      // p at the post-update iterate x_{t+1} = (theta - s q)/lambda.
      const double p_next =
          (inst.theta_dot_q - star * inst.qnorm2) / inst.lambda_next;
      CHECK(star ==
            doctest::Approx(inst.loss.d1(p_next)).epsilon(1e-8));
    }
  }
}

TEST_CASE("choose_surrogate basics") {
  Rng rng(10);
  for (int i = 0; i < 50; ++i) {
    const auto inst = random_instance(LossFamily::Logistic, rng);
    const auto lin = choose_surrogate(Strategy::Linearized, inst);
    CHECK(lin.coeff == inst.loss.d1(inst.p));
    CHECK(lin.delta == 0.0);
    CHECK(lin.H_at_g == lin.H_at_z);
  }

  // Zero gradient: every strategy returns coeff 0 with delta 0.
  const auto zerog =
      make_instance(ScalarLoss(LossFamily::Squared, 2.0), 2.0, 1.0, 1.0);
  for (const Strategy s : {Strategy::Linearized, Strategy::AProx, Strategy::Iwa,
                           Strategy::Proximal}) {
    const auto dec = choose_surrogate(s, zerog);
    CHECK(dec.coeff == 0.0);
    CHECK(dec.delta == 0.0);
  }
}

TEST_CASE("aprox truncation") {
  // lambda*l(x)/||g||^2 = 50/100 = 0.5: the step is halved.
  const auto far =
      make_instance(ScalarLoss(LossFamily::Squared, 0.0), 10.0, 1.0, 1.0);
  CHECK(choose_surrogate(Strategy::AProx, far).coeff ==
        doctest::Approx(0.5 * far.loss.d1(10.0)));

  // lambda = 8 pushes the ratio to 4: min{1,...} = 1 recovers linearized.
  const auto big =
      make_instance(ScalarLoss(LossFamily::Squared, 0.0), 0.5, 1.0, 8.0);
  CHECK(choose_surrogate(Strategy::AProx, big).coeff ==
        doctest::Approx(big.loss.d1(0.5)));
}

TEST_CASE("iwa surrogate equals the flow-gradient average (quadrature)") {
  Rng rng(11);
  for (const LossFamily f :
       {LossFamily::Squared, LossFamily::Logistic, LossFamily::Exponential}) {
    for (int i = 0; i < 20; ++i) {
      SurrogateInstance inst = random_instance(f, rng);
      // 100-interval Simpson resolves the flow at moderate stiffness.
      inst.qnorm2 = std::min(inst.qnorm2, 2.0);
      inst.lambda_next = std::max(inst.lambda_next, 0.5);
      inst.loss.weight = std::min(inst.loss.weight, 2.0);
      if (f != LossFamily::Squared)
        inst.p = inst.loss.label * std::abs(inst.p);  // correct-side start
      const auto dec = choose_surrogate(Strategy::Iwa, inst);
      const IwaContext ctx{inst.loss, inst.p, inst.qnorm2,
                           1.0 / inst.lambda_next};
      const auto path = iwa_scaling_path(ctx, 100);
      // Simpson quadrature of l'(p(h)) over [0,1] at the sampled points.
      const auto grad = [&](std::size_t j) {
        return inst.loss.d1(inst.p - path[j].s * inst.qnorm2);
      };
      double acc = grad(0) + grad(path.size() - 1);
      for (std::size_t j = 1; j + 1 < path.size(); ++j)
        acc += (j % 2 ? 4.0 : 2.0) * grad(j);
      acc /= 3.0 * (path.size() - 1);
      CHECK(std::abs(dec.coeff - acc) <= 1e-4 * std::max(1.0, std::abs(acc)));
    }
  }
}

TEST_CASE("H inequality for iwa/aprox/proximal on condition-satisfying draws") {
  Rng rng(12);
  for (const LossFamily f : {LossFamily::Squared, LossFamily::Logistic,
                             LossFamily::Exponential, LossFamily::Logarithmic}) {
    for (int i = 0; i < 50; ++i) {
      SurrogateInstance inst = random_instance(f, rng);
      if (f == LossFamily::Logistic) {
        inst.p = inst.loss.label * std::abs(inst.p);  // yp >= 0
      }
      if (f == LossFamily::Logarithmic) {
        // keep the flow inside (0,1)
        const double stay = inst.loss.label == 1.0
                                ? 0.5 * (1.0 - inst.p * inst.p)
                                : 0.5 * (1.0 - (1.0 - inst.p) * (1.0 - inst.p));
        inst.lambda_next = inst.loss.weight * inst.qnorm2 / (0.5 * stay);
      }
      inst.theta_dot_q = inst.lambda_next * inst.p;
      inst.norm_theta2 =
          inst.theta_dot_q * inst.theta_dot_q / inst.qnorm2 + 1.0;
      for (const Strategy s :
           {Strategy::AProx, Strategy::Iwa, Strategy::Proximal}) {
        const auto dec = choose_surrogate(s, inst);
        CHECK(dec.delta >= -1e-9);
        CHECK(dec.H_at_z <= dec.H_at_g + 1e-9);
      }
    }
  }
}

TEST_CASE("proximal dominance over the other strategies") {
  Rng rng(13);
  for (const LossFamily f : {LossFamily::Squared, LossFamily::Logistic,
                             LossFamily::Exponential, LossFamily::Logarithmic}) {
    for (int i = 0; i < 30; ++i) {
      const auto inst = random_instance(f, rng);
      const auto prox = choose_surrogate(Strategy::Proximal, inst);
      for (const Strategy s :
           {Strategy::Linearized, Strategy::AProx, Strategy::Iwa}) {
        CHECK(prox.delta >= choose_surrogate(s, inst).delta - 1e-9);
      }
    }
  }
}
