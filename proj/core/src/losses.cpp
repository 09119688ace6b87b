#include "giftrl/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "giftrl/scalar_math.hpp"

namespace giftrl {

namespace {

// ln(1 + e^u) without overflow.
double softplus(double u) {
  if (u > 0.0) return u + std::log1p(std::exp(-u));
  return std::log1p(std::exp(u));
}

// x*ln(x) with the limit 0 at x = 0.
double xlogx(double x) {
  return x > 0.0 ? x * std::log(x) : 0.0;
}

}  // namespace

std::string to_string(LossFamily f) {
  switch (f) {
    case LossFamily::Squared: return "squared";
    case LossFamily::Logistic: return "logistic";
    case LossFamily::Exponential: return "exponential";
    case LossFamily::Logarithmic: return "logarithmic";
  }
  return "?";
}

LossFamily loss_family_from_string(const std::string& name) {
  if (name == "squared") return LossFamily::Squared;
  if (name == "logistic") return LossFamily::Logistic;
  if (name == "exponential") return LossFamily::Exponential;
  if (name == "logarithmic") return LossFamily::Logarithmic;
  throw std::invalid_argument("unknown loss family: " + name);
}

ScalarLoss::ScalarLoss(LossFamily f, double y, double h)
    : family(f), label(y), weight(h) {
  if (!(h > 0.0)) throw std::invalid_argument("ScalarLoss: weight must be > 0");
  switch (f) {
    case LossFamily::Squared:
      break;
    case LossFamily::Logistic:
    case LossFamily::Exponential:
      if (y != 1.0 && y != -1.0)
        throw std::invalid_argument("ScalarLoss: label must be +-1 for " + to_string(f));
      break;
    case LossFamily::Logarithmic:
      if (y != 0.0 && y != 1.0)
        throw std::invalid_argument("ScalarLoss: label must be 0 or 1 for logarithmic");
      break;
  }
}

bool ScalarLoss::in_domain(double p) const {
  if (!std::isfinite(p)) return false;
  if (family == LossFamily::Logarithmic) return p > 0.0 && p < 1.0;
  return true;
}

double ScalarLoss::value(double p) const {
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return 0.5 * h * (p - y) * (p - y);
    case LossFamily::Logistic:
      return h * softplus(-y * p);
    case LossFamily::Exponential:
      return h * std::exp(-y * p);
    case LossFamily::Logarithmic:
      if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("logarithmic loss: p outside (0,1)");
      return y == 1.0 ? -h * std::log(p) : -h * std::log1p(-p);
  }
  return 0.0;
}

double ScalarLoss::d1(double p) const {
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return h * (p - y);
    case LossFamily::Logistic:
      // -y h / (1 + e^{yp}), evaluated as -y h sigma(-yp) for stability.
      {
        const double u = y * p;
        if (u > 0.0) {
          const double e = std::exp(-u);
          return -y * h * e / (1.0 + e);
        }
        return -y * h / (1.0 + std::exp(u));
      }
    case LossFamily::Exponential:
      return -y * h * std::exp(-y * p);
    case LossFamily::Logarithmic:
      if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("logarithmic loss: p outside (0,1)");
      return y == 1.0 ? -h / p : h / (1.0 - p);
  }
  return 0.0;
}

double ScalarLoss::d2(double p) const {
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return h;
    case LossFamily::Logistic: {
      // h e^{yp} / (1 + e^{yp})^2 = h sigma(yp) sigma(-yp).
      const double e = std::exp(-std::abs(y * p));
      const double d = 1.0 + e;
      return h * e / (d * d);
    }
    case LossFamily::Exponential:
      return h * std::exp(-y * p);
    case LossFamily::Logarithmic:
      if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("logarithmic loss: p outside (0,1)");
      return y == 1.0 ? h / (p * p) : h / ((1.0 - p) * (1.0 - p));
  }
  return 0.0;
}

double ScalarLoss::d3(double p) const {
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return 0.0;
    case LossFamily::Logistic: {
      // h y e^{yp}(1 - e^{yp}) / (1 + e^{yp})^3, computed through
      // sigma(yp)sigma(-yp)(1 - 2 sigma(yp)) so large |yp| underflows
      // gracefully instead of overflowing.
      const double u = y * p;
      const double sig = u > 0.0 ? 1.0 / (1.0 + std::exp(-u))
                                 : std::exp(u) / (1.0 + std::exp(u));
      return h * y * sig * (1.0 - sig) * (1.0 - 2.0 * sig);
    }
    case LossFamily::Exponential:
      return -y * h * std::exp(-y * p);
    case LossFamily::Logarithmic:
      if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("logarithmic loss: p outside (0,1)");
      return y == 1.0 ? -2.0 * h / (p * p * p)
                      : 2.0 * h / ((1.0 - p) * (1.0 - p) * (1.0 - p));
  }
  return 0.0;
}

bool ScalarLoss::conjugate_finite(double s) const {
  if (std::isnan(s)) return false;
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return std::isfinite(s);
    case LossFamily::Logistic: {
      const double u = -s * y / h;
      return u >= 0.0 && u <= 1.0;
    }
    case LossFamily::Exponential:
      return -s * y >= 0.0;
    case LossFamily::Logarithmic:
      return std::isfinite(s);
  }
  return false;
}

double ScalarLoss::conjugate(double s) const {
  const double y = label, h = weight;
  if (!conjugate_finite(s)) return kPlusInf;
  switch (family) {
    case LossFamily::Squared:
      // sup_p sp - h(p-y)^2/2 at p = y + s/h.
      return s * s / (2.0 * h) + s * y;
    case LossFamily::Logistic: {
      // h [u ln u + (1-u) ln(1-u)], u = -sy/h in [0,1] (limits at 0,1).
      const double u = -s * y / h;
      return h * (xlogx(u) + (u < 1.0 ? (1.0 - u) * std::log1p(-u) : 0.0));
    }
    case LossFamily::Exponential: {
      // a ln(a/h) - a, a = -sy >= 0 (limit 0 at a = 0).
      const double a = -s * y;
      return a > 0.0 ? a * std::log(a / h) - a : 0.0;
    }
    case LossFamily::Logarithmic:
      // Loss restricted to p in (0,1); sup attained interior or at the
      // boundary limit.
      if (y == 1.0) {
        if (s >= -h) return s;                    // sup at p -> 1
        return -h + h * std::log(h / (-s));       // interior p = -h/s
      } else {
        if (s <= h) return 0.0;                   // sup at p -> 0
        return s - h + h * std::log(h / s);       // interior p = 1 - h/s
      }
  }
  return kPlusInf;
}

double ScalarLoss::conjugate_d1(double s) const {
  const double y = label, h = weight;
  switch (family) {
    case LossFamily::Squared:
      return s / h + y;
    case LossFamily::Logistic: {
      const double u = -s * y / h;
      if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("logistic conjugate_d1: boundary or outside");
      return y * (std::log1p(-u) - std::log(u));  // y ln((1-u)/u)
    }
    case LossFamily::Exponential: {
      const double a = -s * y;
      if (!(a > 0.0))
        throw std::domain_error("exponential conjugate_d1: boundary or outside");
      return -y * std::log(a / h);
    }
    case LossFamily::Logarithmic:
      if (y == 1.0) return s >= -h ? 1.0 : -h / s;
      return s <= h ? 0.0 : 1.0 - h / s;
  }
  return 0.0;
}

double ScalarLoss::conjugate_oracle(double s) const {
  if (!conjugate_finite(s)) return kPlusInf;
  const auto objective = [&](double p) { return s * p - value(p); };

  double lo, hi;
  if (family == LossFamily::Logarithmic) {
    lo = 1e-12;
    hi = 1.0 - 1e-12;
  } else {
    // Widen until the maximizer is interior (or the widening cap is hit;
    // the objective then approaches its boundary limit).
    lo = -8.0;
    hi = 8.0;
    for (int i = 0; i < 16; ++i) {
      const double arg = maximize_1d(objective, lo, hi, 1e-6);
      const double margin = 0.05 * (hi - lo);
      if (arg - lo > margin && hi - arg > margin) break;
      if (arg - lo <= margin) lo = lo - (hi - lo);
      if (hi - arg <= margin) hi = hi + (hi - lo);
      if (hi - lo > 1600.0) break;
    }
  }
  const double p_star = maximize_1d(objective, lo, hi, 1e-10);
  double best = objective(p_star);
  // The supremum may live on the boundary (flat/limit cases).
  best = std::max(best, objective(lo));
  best = std::max(best, objective(hi));
  return best;
}

}  // namespace giftrl
