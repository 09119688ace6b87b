#include "giftrl/iwa.hpp"

#include <cmath>
#include <stdexcept>

#include "giftrl/scalar_math.hpp"

namespace giftrl {

namespace {

void check(const IwaContext& ctx) {
  if (!(ctx.eta > 0.0)) throw std::invalid_argument("iwa: eta must be > 0");
  if (ctx.qnorm2 < 0.0) throw std::invalid_argument("iwa: qnorm2 must be >= 0");
  if (!ctx.loss.in_domain(ctx.p))
    throw std::domain_error("iwa: p outside loss domain");
}

// ln(tau + e^a) without overflow.
double log_tau_plus_exp(double tau, double a) {
  const double lt = std::log(tau);
  const double m = std::max(lt, a);
  return m + std::log1p(std::exp(std::min(lt, a) - m));
}

}  // namespace

double iwa_scaling_closed_form(const IwaContext& ctx) {
  check(ctx);
  const ScalarLoss& l = ctx.loss;
  const double y = l.label, h = l.weight;
  const double q2 = ctx.qnorm2, eta = ctx.eta, p = ctx.p;

  if (q2 == 0.0) return eta * l.d1(p);  // flow never moves the forecast

  const double tau = h * eta * q2;
  double s;
  switch (l.family) {
    case LossFamily::Squared:
      s = (p - y) / q2 * (1.0 - std::exp(-tau));
      break;
    case LossFamily::Exponential:
      // (py - ln(tau + e^{py})) / (q2 y)
      s = (p * y - log_tau_plus_exp(tau, p * y)) / (q2 * y);
      break;
    case LossFamily::Logistic: {
      // (W(e^{tau + yp + e^{yp}}) - tau - e^{yp}) / (y q2), evaluated as
      // (yp - v) / (y q2) with v + e^v = tau + yp + e^{yp} to dodge the
      // cancellation between W and e^{yp}.
      const double yp = y * p;
      if (yp > 700.0) {
        s = eta * l.d1(p);  // e^{yp} overflows; flow is numerically frozen
        break;
      }
      const double a = tau + yp + std::exp(yp);
      const double v = ln_lambert_w_exp(a);
      s = (yp - v) / (y * q2);
      break;
    }
    case LossFamily::Logarithmic:
      if (y == 1.0) {
        s = (p - std::sqrt(p * p + 2.0 * tau)) / q2;
      } else {
        const double om = 1.0 - p;
        s = (p - 1.0 + std::sqrt(om * om + 2.0 * tau)) / q2;
      }
      break;
    default:
      throw std::logic_error("iwa: unknown family");
  }
  if (!std::isfinite(s))
    throw std::runtime_error("iwa_scaling_closed_form: non-finite result");
  return s;
}

double iwa_scaling_ode(const IwaContext& ctx, double h_end, double step) {
  check(ctx);
  if (!(h_end > 0.0 && h_end <= 1.0))
    throw std::invalid_argument("iwa_scaling_ode: h_end must be in (0,1]");
  const ScalarLoss l = ctx.loss;
  const double q2 = ctx.qnorm2, eta = ctx.eta, p0 = ctx.p;
  const auto rhs = [&](double h, double s) {
    (void)h;
    const double p = p0 - s * q2;
    if (!l.in_domain(p))
      throw std::runtime_error("iwa_scaling_ode: trajectory left loss domain at h=" +
                               std::to_string(h));
    return eta * l.d1(p);
  };
  return integrate_ode(rhs, h_end, step);
}

std::vector<FlowSample> iwa_scaling_path(const IwaContext& ctx, int n_samples,
                                         double step) {
  check(ctx);
  if (n_samples < 1) throw std::invalid_argument("iwa_scaling_path: n_samples >= 1");
  const ScalarLoss l = ctx.loss;
  const double q2 = ctx.qnorm2, eta = ctx.eta, p0 = ctx.p;
  const auto rhs = [&](double h, double s) {
    (void)h;
    const double p = p0 - s * q2;
    if (!l.in_domain(p))
      throw std::runtime_error("iwa_scaling_path: trajectory left loss domain at h=" +
                               std::to_string(h));
    return eta * l.d1(p);
  };
  std::vector<FlowSample> path;
  path.reserve(n_samples + 1);
  const double dt = 1.0 / n_samples;
  double next = 0.0;
  integrate_ode(rhs, 1.0, step, [&](double h, double s) {
    if (h + 1e-9 >= next) {
      path.push_back({h, s, rhs(h, s)});
      next += dt;
    }
  });
  return path;
}

double iwa_surrogate_coeff(const IwaContext& ctx) {
  return iwa_scaling_closed_form(ctx) / ctx.eta;
}

std::vector<std::pair<int, double>> iwa_surrogate(
    const IwaContext& ctx, const std::vector<std::pair<int, double>>& q) {
  const double c = iwa_surrogate_coeff(ctx);
  std::vector<std::pair<int, double>> z;
  z.reserve(q.size());
  for (const auto& [idx, val] : q) z.emplace_back(idx, c * val);
  return z;
}

}  // namespace giftrl
