#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "giftrl/data.hpp"
#include "giftrl/ftrl.hpp"

namespace giftrl {

// One eta0 sweep: for every (strategy, eta0, seed) cell, a fresh learner
// makes a single pass over a seed-shuffled copy of the data.
struct SweepConfig {
  std::vector<Strategy> strategies{Strategy::Linearized, Strategy::AProx,
                                   Strategy::Iwa, Strategy::Proximal};
  std::vector<double> eta_grid;  // see log_grid()
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  LossFamily family = LossFamily::Squared;
  ScheduleKind schedule = ScheduleKind::SqrtT;
  Dataset data;
  bool record_diagnostics = true;
  int trajectory_stride = 1;  // record every k-th round; 0 = final row only
  int threads = 0;            // 0 = hardware concurrency
};

struct SweepRow {
  Strategy strategy;
  double eta0;
  std::uint64_t seed;
  std::int64_t t;
  double avg_loss;   // (1/t) sum_{i<=t} loss_i(x_i)
  double cum_delta;  // sum_{i<=t} delta_i
  double bound_gap;  // bound RHS(u*) - regret(u*) at horizon t
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// n log-spaced points over [lo, hi] inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

/// Runs every cell; failed cells (loss-domain aborts) become a single
/// all-NaN row instead of aborting the sweep. Cells are independent, so
/// the result is the same for any execution order or thread count.
SweepResult run_sweep(const SweepConfig& config);

/// Deterministic CSV with the fixed header
/// `strategy,eta0,seed,t,avg_loss,cum_delta,bound_gap`, rows sorted by
/// (strategy, eta0, seed, t), floats in shortest round-trip form.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv_file(const SweepResult& result, const std::string& path);

/// Parses emit_csv output back (used by `plot` and the round-trip tests).
SweepResult parse_csv(std::istream& in);
SweepResult parse_csv_file(const std::string& path);

/// Final (largest-t) averaged loss per (strategy, eta0), averaged over
/// seeds; NaN cells are skipped, all-NaN cells produce NaN.
std::map<std::pair<Strategy, double>, double> mean_final_loss(
    const SweepResult& result);

/// Static SVG 1.1: x = log10(eta0), y = mean final averaged loss, one
/// polyline per strategy, legend and axis labels.
void emit_svg(const SweepResult& result, std::ostream& out);
void emit_svg_file(const SweepResult& result, const std::string& path);

}  // namespace giftrl
