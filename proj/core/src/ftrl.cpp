#include "giftrl/ftrl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace giftrl {

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::ConstOverEta: return "const";
    case ScheduleKind::SqrtT: return "sqrt_t";
    case ScheduleKind::AdaptiveNorm: return "adaptive_norm";
  }
  return "?";
}

ScheduleKind schedule_from_string(const std::string& name) {
  if (name == "const") return ScheduleKind::ConstOverEta;
  if (name == "sqrt_t") return ScheduleKind::SqrtT;
  if (name == "adaptive_norm") return ScheduleKind::AdaptiveNorm;
  throw std::invalid_argument("unknown schedule: " + name);
}

LambdaSchedule::LambdaSchedule(ScheduleKind kind, double eta0)
    : kind_(kind), eta0_(eta0) {
  if (!(eta0 > 0.0))
    throw std::invalid_argument("LambdaSchedule: eta0 must be > 0");
}

double LambdaSchedule::lambda(std::int64_t t) {
  if (t == frozen_t_) return frozen_lambda_;
  if (t < frozen_t_)
    throw std::logic_error("LambdaSchedule: lambda queried out of order");
  double lam = 1.0 / eta0_;
  switch (kind_) {
    case ScheduleKind::ConstOverEta:
      lam = 1.0 / eta0_;
      break;
    case ScheduleKind::SqrtT:
      lam = std::sqrt(static_cast<double>(t)) / eta0_;
      break;
    case ScheduleKind::AdaptiveNorm:
      lam = std::sqrt(1.0 + sum_z_norm2_) / eta0_;
      break;
  }
  frozen_t_ = t;
  frozen_lambda_ = lam;
  return lam;
}

void LambdaSchedule::observe_z_norm2(double z_norm2) {
  sum_z_norm2_ += z_norm2;
}

Learner::Learner(int dim, LossFamily family, LearnerOptions options)
    : dim_(dim),
      family_(family),
      options_(options),
      schedule_(options.schedule, options.eta0),
      theta_(dim, 0.0) {
  if (dim < 1) throw std::invalid_argument("Learner: dim must be >= 1");
  lambda_t_ = schedule_.lambda(1);
}

double Learner::predict(const SparseVec& q) const {
  double acc = 0.0;
  for (const auto& f : q) acc += theta_[f.index] * f.value;
  return acc / lambda_t_;
}

std::vector<double> Learner::iterate() const {
  std::vector<double> x(theta_);
  for (auto& v : x) v /= lambda_t_;
  return x;
}

RoundRecord Learner::step(const Example& example) {
  if (example.features.empty())
    throw std::invalid_argument("Learner::step: example has no features");

  RoundRecord rec;
  rec.t = t_;
  rec.lambda_t = lambda_t_;

  const double theta_dot_q = dot(theta_, example.features);
  const double p = theta_dot_q / lambda_t_;
  rec.p = p;

  ScalarLoss loss(family_, example.label, example.weight);
  if (!loss.in_domain(p)) {
    if (options_.on_domain_error == DomainPolicy::Abort)
      throw DomainViolation(t_, "forecast " + std::to_string(p) +
                                    " outside loss domain at round " +
                                    std::to_string(t_));
    rec.skipped = true;
    rec.lambda_next = lambda_t_;
    return rec;  // state untouched; the round is not counted
  }

  rec.loss = loss.value(p);
  rec.g_coeff = loss.d1(p);

  const double lambda_next = schedule_.lambda(t_ + 1);
  rec.lambda_next = lambda_next;

  SurrogateInstance inst{loss, p, theta_dot_q, norm_theta2_,
                         norm2(example.features), lambda_next};
  const SurrogateDecision dec = choose_surrogate(options_.strategy, inst);
  rec.z_coeff = dec.coeff;
  if (options_.diagnostics) {
    rec.H_at_g = dec.H_at_g;
    rec.H_at_z = dec.H_at_z;
    rec.delta = dec.delta;
  }

  // psi*_{t+1}(theta - g) - psi*_t(theta) + <x_t, g_t> - delta_t.
  // The bound needs the true delta_t, so with diagnostics disabled the
  // term is marked invalid instead of silently wrong.
  if (options_.diagnostics) {
    const double g = rec.g_coeff;
    const double norm_theta_minus_g2 =
        norm_theta2_ - 2.0 * g * theta_dot_q + g * g * inst.qnorm2;
    rec.bound_term = norm_theta_minus_g2 / (2.0 * lambda_next) -
                     norm_theta2_ / (2.0 * lambda_t_) + p * g - rec.delta;
  } else {
    rec.bound_term = std::numeric_limits<double>::quiet_NaN();
  }

  // theta <- theta - z; ||theta||^2 updated incrementally over q's support.
  const double z = dec.coeff;
  if (z != 0.0) {
    for (const auto& f : example.features) theta_[f.index] -= z * f.value;
    norm_theta2_ += -2.0 * z * theta_dot_q + z * z * inst.qnorm2;
    if (norm_theta2_ < 0.0) norm_theta2_ = 0.0;
  }
  schedule_.observe_z_norm2(z * z * inst.qnorm2);

  ++t_;
  lambda_t_ = lambda_next;
  return rec;
}

RunTrace run_online(const Dataset& data, LossFamily family,
                    const LearnerOptions& options) {
  Learner learner(data.dim, family, options);
  RunTrace trace;
  trace.rounds.reserve(data.size());
  for (const auto& ex : data.examples) {
    RoundRecord rec = learner.step(ex);
    if (rec.skipped) ++trace.skipped;
    trace.rounds.push_back(rec);
  }
  trace.theta_final = learner.theta();
  trace.norm_theta_final2 = learner.norm_theta2();
  trace.lambda_final = learner.lambda();
  return trace;
}

RegretLedger evaluate_comparator(const RunTrace& trace, const Dataset& data,
                                 LossFamily family,
                                 std::span<const double> u) {
  if (data.size() != trace.rounds.size())
    throw std::invalid_argument("evaluate_comparator: data/trace length mismatch");

  RegretLedger ledger;
  ledger.u.assign(u.begin(), u.end());

  double u_norm2 = 0.0;
  for (const double v : u) u_norm2 += v * v;

  for (std::size_t i = 0; i < data.size(); ++i) {
    const RoundRecord& rec = trace.rounds[i];
    if (rec.skipped) continue;
    const Example& ex = data.examples[i];
    ScalarLoss loss(family, ex.label, ex.weight);
    double pu = 0.0;
    for (const auto& f : ex.features)
      pu += (f.index < static_cast<int>(u.size()) ? u[f.index] : 0.0) * f.value;
    ledger.cum_loss_alg += rec.loss;
    ledger.cum_loss_comp += loss.value(pu);
    ledger.bound_sum += rec.bound_term;
  }

  // Endpoint terms. With quadratic psi over R^d: min psi_1 = 0,
  // F_{T+1}(x) = (lambda_{T+1}/2)||x||^2 - <theta_{T+1}, x>, and
  // x_{T+1} = theta_{T+1}/lambda_{T+1} gives F_{T+1}(x_{T+1}) =
  // -||theta_{T+1}||^2 / (2 lambda_{T+1}).
  const double lam_final = trace.lambda_final;
  double theta_dot_u = 0.0;
  for (std::size_t j = 0; j < u.size() && j < trace.theta_final.size(); ++j)
    theta_dot_u += trace.theta_final[j] * u[j];

  const double psi_u = 0.5 * lam_final * u_norm2;
  const double F_at_x = -trace.norm_theta_final2 / (2.0 * lam_final);
  const double F_at_u = psi_u - theta_dot_u;
  ledger.bound_rhs = psi_u + ledger.bound_sum + F_at_x - F_at_u;
  return ledger;
}

}  // namespace giftrl
