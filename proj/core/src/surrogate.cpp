#include "giftrl/surrogate.hpp"

#include <cmath>
#include <stdexcept>

#include "giftrl/iwa.hpp"
#include "giftrl/scalar_math.hpp"

namespace giftrl {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Linearized: return "linearized";
    case Strategy::AProx: return "aprox";
    case Strategy::Iwa: return "iwa";
    case Strategy::Proximal: return "proximal";
  }
  return "?";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "linearized") return Strategy::Linearized;
  if (name == "aprox") return Strategy::AProx;
  if (name == "iwa") return Strategy::Iwa;
  if (name == "proximal") return Strategy::Proximal;
  throw std::invalid_argument("unknown strategy: " + name);
}

double eval_H(const SurrogateInstance& inst, double s) {
  const double c = inst.loss.conjugate(s);
  if (c == kPlusInf) return kPlusInf;
  const double quad = inst.norm_theta2 - 2.0 * s * inst.theta_dot_q +
                      s * s * inst.qnorm2;
  return quad / (2.0 * inst.lambda_next) + c;
}

double eval_H_diff(const SurrogateInstance& inst, double a, double b) {
  // ||theta||^2 cancels between H(a) and H(b).
  const double quad = -2.0 * (a - b) * inst.theta_dot_q +
                      (a * a - b * b) * inst.qnorm2;
  return quad / (2.0 * inst.lambda_next) + inst.loss.conjugate(a) -
         inst.loss.conjugate(b);
}

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Finds the root of a monotone function on an unbounded scale by doubling
// expansion from x0 followed by solve_1d.
double monotone_root(const std::function<double(double)>& f, double x0,
                     double tol) {
  double f0 = f(x0);
  if (f0 == 0.0) return x0;
  const bool need_right = f0 < 0.0 ? f(x0 + 1.0) > f0 : f(x0 + 1.0) < f0;
  // need_right: direction in which f moves toward zero.
  const double dir = need_right ? 1.0 : -1.0;
  double step = 1.0;
  double a = x0, fa = f0;
  for (int i = 0; i < 200; ++i) {
    const double b = a + dir * step;
    const double fb = f(b);
    if (fb == 0.0) return b;
    if ((fa > 0.0) != (fb > 0.0)) {
      const Bracket br = a < b ? Bracket{a, b} : Bracket{b, a};
      return solve_1d(f, br, tol);
    }
    a = b;
    fa = fb;
    step *= 2.0;
  }
  throw std::runtime_error("prox_coeff: bracket expansion failed");
}

}  // namespace

double prox_coeff(const SurrogateInstance& inst) {
  const ScalarLoss& l = inst.loss;
  const double y = l.label, h = l.weight;
  const double q2 = inst.qnorm2, lam = inst.lambda_next, tq = inst.theta_dot_q;
  if (!(q2 > 0.0)) throw std::invalid_argument("prox_coeff: q must be nonzero");
  if (!(lam > 0.0)) throw std::invalid_argument("prox_coeff: lambda must be > 0");

  // Stationarity: (s q2 - <theta,q>)/lam + conj'(s) = 0; H is strictly
  // convex, so the root is the global minimizer.
  switch (l.family) {
    case LossFamily::Squared:
      // Affine stationarity equation: exact solution.
      return (tq / lam - y) / (1.0 / h + q2 / lam);
    case LossFamily::Logistic: {
      // Reparametrize s = -y h u with u = sigmoid(xi): conj'(s) = -y*xi
      // exactly, so the boundary singularities vanish and u near 0 or 1
      // keeps full precision.
      const auto g = [&](double xi) {
        const double s = -y * h * sigmoid(xi);
        return (s * q2 - tq) / lam - y * xi;
      };
      const double xi = monotone_root(g, 0.0, 1e-12);
      return -y * h * sigmoid(xi);
    }
    case LossFamily::Exponential: {
      // s = -y h e^{xi}: conj'(s) = -y*xi.
      const auto g = [&](double xi) {
        const double s = -y * h * std::exp(xi);
        if (!std::isfinite(s)) return y < 0 ? kPlusInf : -kPlusInf;
        return (s * q2 - tq) / lam - y * xi;
      };
      const double xi = monotone_root(g, 0.0, 1e-12);
      return -y * h * std::exp(xi);
    }
    case LossFamily::Logarithmic: {
      // conj' is finite and bounded on all of R; root-find on s directly.
      const auto g = [&](double s) {
        return (s * q2 - tq) / lam + l.conjugate_d1(s);
      };
      return monotone_root(g, 0.0, 1e-12);
    }
  }
  throw std::logic_error("prox_coeff: unknown family");
}

SurrogateDecision choose_surrogate(Strategy strategy,
                                   const SurrogateInstance& inst) {
  const ScalarLoss& l = inst.loss;
  const double lam = inst.lambda_next;
  if (!(lam > 0.0))
    throw std::invalid_argument("choose_surrogate: lambda_next must be > 0");

  SurrogateDecision dec;
  const double g = inst.qnorm2 > 0.0 ? l.d1(inst.p) : 0.0;
  if (g == 0.0 || inst.qnorm2 == 0.0) {
    const double H0 = inst.norm_theta2 / (2.0 * lam) + l.conjugate(0.0);
    return {0.0, H0, H0, 0.0};
  }

  switch (strategy) {
    case Strategy::Linearized:
      dec.coeff = g;
      break;
    case Strategy::AProx: {
      const double gnorm2 = g * g * inst.qnorm2;
      const double c = std::min(1.0, lam * l.value(inst.p) / gnorm2);
      dec.coeff = c * g;
      break;
    }
    case Strategy::Iwa: {
      IwaContext ctx{l, inst.p, inst.qnorm2, 1.0 / lam};
      dec.coeff = lam * iwa_scaling_closed_form(ctx);
      break;
    }
    case Strategy::Proximal:
      dec.coeff = prox_coeff(inst);
      break;
  }

  dec.H_at_g = eval_H(inst, g);
  if (dec.coeff == g) {
    dec.delta = 0.0;
    dec.H_at_z = dec.H_at_g;
  } else {
    dec.delta = eval_H_diff(inst, g, dec.coeff);
    dec.H_at_z = dec.H_at_g - dec.delta;
  }
  return dec;
}

}  // namespace giftrl
