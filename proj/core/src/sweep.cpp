#include "giftrl/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace giftrl {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Cell {
  Strategy strategy;
  double eta0;
  std::uint64_t seed;
};

// Single pass of one cell; per-round accounting against the dataset
// comparator (zero vector when there is none). `shuffled` is the seed's
// permutation of the data, shared across the strategies and etas.
std::vector<SweepRow> run_cell(const SweepConfig& cfg, const Cell& cell,
                               const Dataset& shuffled) {
  std::vector<SweepRow> rows;
  const std::vector<double>& u = cfg.data.comparator;

  LearnerOptions opt;
  opt.strategy = cell.strategy;
  opt.schedule = cfg.schedule;
  opt.eta0 = cell.eta0;
  opt.on_domain_error = DomainPolicy::Abort;
  opt.diagnostics = cfg.record_diagnostics;

  const std::int64_t n = static_cast<std::int64_t>(shuffled.size());
  try {
    Learner learner(shuffled.dim, cfg.family, opt);
    double cum_loss = 0.0, cum_delta = 0.0, cum_bound = 0.0;
    double cum_loss_u = 0.0, theta_dot_u = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const Example& ex = shuffled.examples[i];
      const RoundRecord rec = learner.step(ex);
      cum_loss += rec.loss;
      cum_delta += rec.delta;
      cum_bound += rec.bound_term;
      double bound_gap = kNaN;
      if (cfg.record_diagnostics) {
        double q_dot_u = 0.0;
        for (const auto& f : ex.features)
          if (f.index < static_cast<int>(u.size())) q_dot_u += u[f.index] * f.value;
        const ScalarLoss lu(cfg.family, ex.label, ex.weight);
        cum_loss_u += lu.in_domain(q_dot_u) ? lu.value(q_dot_u) : kNaN;
        theta_dot_u -= rec.z_coeff * q_dot_u;  // theta moved by -z*q
        // Bound RHS at horizon t: the psi_{t+1}(u) terms cancel between
        // psi_{t+1}(u) and -F_{t+1}(u), leaving
        //   sum bound_terms - ||theta_{t+1}||^2/(2 lambda_{t+1}) + <theta_{t+1}, u>.
        const double rhs = cum_bound -
                           learner.norm_theta2() / (2.0 * rec.lambda_next) +
                           theta_dot_u;
        bound_gap = rhs - (cum_loss - cum_loss_u);
      }
      const std::int64_t t = rec.t;
      const bool last = i + 1 == n;
      const bool due = cfg.trajectory_stride > 0 &&
                       t % cfg.trajectory_stride == 0;
      if (due || last) {
        rows.push_back({cell.strategy, cell.eta0, cell.seed, t,
                        cum_loss / static_cast<double>(t),
                        cfg.record_diagnostics ? cum_delta : kNaN, bound_gap});
      }
    }
  } catch (const DomainViolation&) {
    rows.assign(1, {cell.strategy, cell.eta0, cell.seed, n, kNaN, kNaN, kNaN});
  } catch (const std::runtime_error&) {
    // Numeric blow-up inside a strategy (divergent cells at extreme eta0)
    // is a per-cell failure, same as a domain abort.
    rows.assign(1, {cell.strategy, cell.eta0, cell.seed, n, kNaN, kNaN, kNaN});
  }
  return rows;
}

int strategy_rank(Strategy s) { return static_cast<int>(s); }

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 1)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and n >= 1");
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < n; ++i)
    grid[i] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
  return grid;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.eta_grid.empty())
    throw std::invalid_argument("run_sweep: empty eta grid");
  for (const double e : cfg.eta_grid)
    if (!(e > 0.0)) throw std::invalid_argument("run_sweep: eta0 must be > 0");

  std::vector<Cell> cells;
  for (const Strategy s : cfg.strategies)
    for (const double eta : cfg.eta_grid)
      for (const std::uint64_t seed : cfg.seeds)
        cells.push_back({s, eta, seed});

  // One permutation per seed, shared read-only across cells.
  std::map<std::uint64_t, Dataset> shuffled;
  for (const std::uint64_t seed : cfg.seeds)
    shuffled.emplace(seed, shuffle(cfg.data, seed));

  std::vector<std::vector<SweepRow>> per_cell(cells.size());
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned n_threads =
      cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, hw);

  if (n_threads <= 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      per_cell[i] = run_cell(cfg, cells[i], shuffled.at(cells[i].seed));
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        per_cell[i] = run_cell(cfg, cells[i], shuffled.at(cells[i].seed));
      }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < std::min<std::size_t>(n_threads, cells.size()); ++k)
      pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  for (const auto& rows : per_cell)
    result.rows.insert(result.rows.end(), rows.begin(), rows.end());
  return result;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, ptr);
}

std::vector<SweepRow> sorted_rows(const SweepResult& result) {
  std::vector<SweepRow> rows = result.rows;
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (strategy_rank(a.strategy) != strategy_rank(b.strategy))
      return strategy_rank(a.strategy) < strategy_rank(b.strategy);
    if (a.eta0 != b.eta0) return a.eta0 < b.eta0;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.t < b.t;
  });
  return rows;
}

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& out) {
  std::string buf = "strategy,eta0,seed,t,avg_loss,cum_delta,bound_gap\n";
  for (const SweepRow& r : sorted_rows(result)) {
    buf += to_string(r.strategy);
    buf += ',';
    append_double(buf, r.eta0);
    buf += ',';
    buf += std::to_string(r.seed);
    buf += ',';
    buf += std::to_string(r.t);
    buf += ',';
    append_double(buf, r.avg_loss);
    buf += ',';
    append_double(buf, r.cum_delta);
    buf += ',';
    append_double(buf, r.bound_gap);
    buf += '\n';
    if (buf.size() > (1u << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void emit_csv_file(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(result, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

double parse_field_double(std::string_view tok) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw std::runtime_error("bad CSV number: " + std::string(tok));
  return v;
}

}  // namespace

SweepResult parse_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  if (!std::getline(in, line) ||
      line != "strategy,eta0,seed,t,avg_loss,cum_delta,bound_gap")
    throw std::runtime_error("bad CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<std::string_view, 7> f;
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t comma = i < 6 ? line.find(',', pos) : line.size();
      if (comma == std::string::npos) throw std::runtime_error("short CSV row");
      f[i] = std::string_view(line).substr(pos, comma - pos);
      pos = comma + 1;
    }
    SweepRow r;
    r.strategy = strategy_from_string(std::string(f[0]));
    r.eta0 = parse_field_double(f[1]);
    r.seed = static_cast<std::uint64_t>(std::stoull(std::string(f[2])));
    r.t = static_cast<std::int64_t>(std::stoll(std::string(f[3])));
    r.avg_loss = parse_field_double(f[4]);
    r.cum_delta = parse_field_double(f[5]);
    r.bound_gap = parse_field_double(f[6]);
    result.rows.push_back(r);
  }
  return result;
}

SweepResult parse_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_csv(in);
}

std::map<std::pair<Strategy, double>, double> mean_final_loss(
    const SweepResult& result) {
  // Final row per (strategy, eta0, seed), then seed-mean.
  std::map<std::tuple<Strategy, double, std::uint64_t>,
           std::pair<std::int64_t, double>>
      finals;
  for (const SweepRow& r : result.rows) {
    auto& slot = finals[{r.strategy, r.eta0, r.seed}];
    if (slot.first <= r.t) slot = {r.t, r.avg_loss};
  }
  std::map<std::pair<Strategy, double>, std::pair<double, int>> acc;
  for (const auto& [key, tl] : finals) {
    if (std::isnan(tl.second)) continue;
    auto& a = acc[{std::get<0>(key), std::get<1>(key)}];
    a.first += tl.second;
    a.second += 1;
  }
  std::map<std::pair<Strategy, double>, double> out;
  for (const auto& [key, tl] : finals) {
    const std::pair<Strategy, double> cell{std::get<0>(key), std::get<1>(key)};
    const auto it = acc.find(cell);
    out[cell] = it == acc.end() || it->second.second == 0
                    ? kNaN
                    : it->second.first / it->second.second;
  }
  return out;
}

}  // namespace giftrl
