#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "giftrl/data.hpp"
#include "giftrl/losses.hpp"
#include "giftrl/surrogate.hpp"

namespace giftrl {

enum class ScheduleKind { ConstOverEta, SqrtT, AdaptiveNorm };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_from_string(const std::string& name);

// Regularizer strengths lambda_t. lambda(t) is fixed the first time it is
// queried and never changes afterwards: AdaptiveNorm accumulates ||z||^2
// of the surrogates observed so far, and since lambda_{t+1} is needed
// before z_t exists, it uses the sums through z_{t-1} (one-round lag).
class LambdaSchedule {
 public:
  LambdaSchedule(ScheduleKind kind, double eta0);

  ScheduleKind kind() const { return kind_; }
  double eta0() const { return eta0_; }

  // Lambda for round t (1-based). Must be called with non-decreasing t.
  double lambda(std::int64_t t);

  // Record ||z_t||^2 after the round's surrogate is chosen.
  void observe_z_norm2(double z_norm2);

 private:
  ScheduleKind kind_;
  double eta0_;
  double sum_z_norm2_ = 0.0;
  std::int64_t frozen_t_ = 0;
  double frozen_lambda_ = 0.0;
};

enum class DomainPolicy { Abort, Skip };

struct LearnerOptions {
  Strategy strategy = Strategy::Linearized;
  ScheduleKind schedule = ScheduleKind::SqrtT;
  double eta0 = 1.0;
  DomainPolicy on_domain_error = DomainPolicy::Abort;
  bool diagnostics = true;
};

// Everything recorded about one round. bound_term is the per-round
// summand of the regret upper bound:
//   psi*_{t+1}(theta_t - g_t) - psi*_t(theta_t) + <x_t, g_t> - delta_t.
struct RoundRecord {
  std::int64_t t = 0;
  double p = 0.0;
  double loss = 0.0;
  double g_coeff = 0.0;
  double z_coeff = 0.0;
  double H_at_g = 0.0;
  double H_at_z = 0.0;
  double delta = 0.0;
  double lambda_t = 0.0;
  double lambda_next = 0.0;
  double bound_term = 0.0;
  bool skipped = false;
};

// Raised when a logarithmic-loss forecast leaves (0,1) under the Abort
// policy; carries the offending round.
struct DomainViolation : std::runtime_error {
  std::int64_t round;
  DomainViolation(std::int64_t t, const std::string& what)
      : std::runtime_error(what), round(t) {}
};

// The generalized implicit FTRL state machine over V = R^d with quadratic
// regularizers psi_t = (lambda_t/2)||x||^2, so x_t = theta_t / lambda_t.
class Learner {
 public:
  Learner(int dim, LossFamily family, LearnerOptions options);

  /// <q, x_t> = <q, theta_t>/lambda_t without materializing x_t.
  double predict(const SparseVec& q) const;

  /// One round of Algorithm line 3-7. Returns the round record; updates
  /// theta <- theta - z_t and advances t.
  RoundRecord step(const Example& example);

  std::int64_t round() const { return t_; }
  double lambda() const { return lambda_t_; }
  const std::vector<double>& theta() const { return theta_; }
  double norm_theta2() const { return norm_theta2_; }
  std::vector<double> iterate() const;  // x_t = theta_t / lambda_t
  const LearnerOptions& options() const { return options_; }
  LossFamily family() const { return family_; }

 private:
  int dim_;
  LossFamily family_;
  LearnerOptions options_;
  LambdaSchedule schedule_;
  std::vector<double> theta_;
  double norm_theta2_ = 0.0;
  std::int64_t t_ = 1;
  double lambda_t_;
};

// A completed run: the per-round records plus the final dual state needed
// to evaluate the bound's endpoint terms.
struct RunTrace {
  std::vector<RoundRecord> rounds;
  std::vector<double> theta_final;
  double norm_theta_final2 = 0.0;
  double lambda_final = 0.0;  // lambda_{T+1}
  std::int64_t skipped = 0;
};

/// Runs the learner over the examples in order.
RunTrace run_online(const Dataset& data, LossFamily family,
                    const LearnerOptions& options);

// Comparator accounting for a completed run.
struct RegretLedger {
  double cum_loss_alg = 0.0;
  double cum_loss_comp = 0.0;
  double bound_sum = 0.0;    // sum of per-round bound terms
  double bound_rhs = 0.0;    // full right-hand side of the regret bound
  std::vector<double> u;
  double regret() const { return cum_loss_alg - cum_loss_comp; }
  double gap() const { return bound_rhs - regret(); }
};

/// Evaluates realized regret and the full regret upper bound
///   psi_{T+1}(u) - min psi_1 + sum_t bound_term_t
///   + F_{T+1}(x_{T+1}) - F_{T+1}(u)
/// for the comparator u. `data` must be the run-order example sequence.
RegretLedger evaluate_comparator(const RunTrace& trace, const Dataset& data,
                                 LossFamily family, std::span<const double> u);

}  // namespace giftrl
