// giftrl-bench: eta0 sweeps across surrogate strategies, guarantee
// verification suites, and CSV -> SVG re-plotting.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "giftrl/data.hpp"
#include "giftrl/ftrl.hpp"
#include "giftrl/sweep.hpp"
#include "giftrl/verify.hpp"

#ifdef GIFTRL_HAVE_ZLIB
#include <zlib.h>
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

// "lo:hi:n" -> n log-spaced points.
std::vector<double> parse_eta_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw CLI::ValidationError("--eta-grid", "expected lo:hi:n");
  return giftrl::log_grid(std::stod(parts[0]), std::stod(parts[1]),
                          std::stoi(parts[2]));
}

// "a:b" inclusive range or comma list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2)
      throw CLI::ValidationError("--seeds", "expected a:b or comma list");
    const auto lo = std::stoull(parts[0]), hi = std::stoull(parts[1]);
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (const auto& tok : split(spec, ',')) seeds.push_back(std::stoull(tok));
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return seeds;
}

std::string read_possibly_gzipped(const std::string& path) {
  const bool gz = path.size() > 3 && path.substr(path.size() - 3) == ".gz";
  if (!gz) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
#ifdef GIFTRL_HAVE_ZLIB
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string out;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, n);
  const bool bad = n < 0;
  gzclose(f);
  if (bad) throw std::runtime_error("gzip read failed: " + path);
  return out;
#else
  throw std::runtime_error("built without zlib; cannot read " + path);
#endif
}

giftrl::Task parse_task(const std::string& name) {
  if (name == "reg" || name == "regression") return giftrl::Task::Regression;
  if (name == "pm1" || name == "binary_pm1") return giftrl::Task::BinaryPM1;
  if (name == "01" || name == "binary_01") return giftrl::Task::Binary01;
  throw std::runtime_error("unknown synth task: " + name);
}

// --data accepts either a LibSVM path (optionally .gz) or a synthetic
// spec "synth:task=reg,n=1000,d=10,noise=0.1,seed=0".
giftrl::Dataset load_data(const std::string& spec, bool normalize) {
  giftrl::Dataset ds;
  if (spec.rfind("synth:", 0) == 0) {
    giftrl::Task task = giftrl::Task::Regression;
    int n = 1000, d = 10;
    double noise = 0.1;
    std::uint64_t seed = 0;
    for (const auto& kv : split(spec.substr(6), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("bad synth spec token: " + kv);
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "task") task = parse_task(val);
      else if (key == "n") n = std::stoi(val);
      else if (key == "d") d = std::stoi(val);
      else if (key == "noise") noise = std::stod(val);
      else if (key == "seed") seed = std::stoull(val);
      else throw std::runtime_error("unknown synth key: " + key);
    }
    ds = giftrl::synth_dataset(task, n, d, noise, seed);
  } else {
    const std::string text = read_possibly_gzipped(spec);
    std::istringstream in(text);
    ds = giftrl::parse_libsvm(in);
  }
  if (normalize) ds = giftrl::normalize_and_bias(ds);
  return ds;
}

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("GIFTRL_OUT_DIR"); env && *env) return env;
  return ".";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("bad boolean config value: " + v);
}

// Applies `key=value` lines for options not already given on the command
// line (flags override the file).
void apply_config(
    const std::string& path, const CLI::App* sweep,
    const std::map<std::string, std::function<void(const std::string&)>>&
        setters) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    if (sweep->count("--" + key) == 0) it->second(val);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized implicit FTRL benchmark harness"};
  app.require_subcommand(1);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "run an eta0 sweep and emit CSV+SVG");
  std::string config_path;
  sweep->add_option("--config", config_path,
                    "key=value config file; command-line flags override");
  std::string data_spec, loss_name = "squared", strategies_csv =
      "linearized,aprox,iwa,proximal";
  std::string eta_spec = "1e-3:1e3:25", seeds_spec = "0:9",
              schedule_name = "sqrt_t", out_dir_flag, base_name = "sweep";
  int stride = 1, threads = 0;
  bool diagnostics = true, normalize = false;
  sweep->add_option("--data", data_spec,
                    "LibSVM path (.gz ok) or synth:task=...,n=...,d=...");
  sweep->add_option("--loss", loss_name,
                    "squared|logistic|exponential|logarithmic");
  sweep->add_option("--strategies", strategies_csv, "comma list of strategies");
  sweep->add_option("--eta-grid", eta_spec, "lo:hi:n log-spaced");
  sweep->add_option("--seeds", seeds_spec, "a:b range or comma list");
  sweep->add_option("--schedule", schedule_name, "const|sqrt_t|adaptive_norm");
  sweep->add_option("--out-dir", out_dir_flag,
                    "output directory (default $GIFTRL_OUT_DIR or .)");
  sweep->add_option("--name", base_name, "output base name");
  sweep->add_option("--stride", stride,
                    "record every k-th round; 0 = final row only");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_flag("--normalize,!--no-normalize", normalize,
                  "max-abs column scaling + bias feature");
  sweep->add_flag("--diagnostics,!--no-diagnostics", diagnostics,
                  "record per-round delta and bound gap");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run the guarantee verification suites");
  std::string suite_name = "all";
  std::uint64_t verify_seed = 20240801;
  verify->add_option("--suite", suite_name,
                     "conjugates|iwa_oracle|h_inequality|regret_bound|lemmas|all");
  verify->add_option("--seed", verify_seed, "suite RNG seed");

  // ---- plot ----
  auto* plot = app.add_subcommand("plot", "re-render an SVG from a sweep CSV");
  std::string csv_path, svg_path;
  plot->add_option("--csv", csv_path, "input CSV from `sweep`")->required();
  plot->add_option("--out", svg_path, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints help/error text
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep) {
      if (!config_path.empty()) {
        const std::map<std::string, std::function<void(const std::string&)>>
            setters{
                {"data", [&](const std::string& v) { data_spec = v; }},
                {"loss", [&](const std::string& v) { loss_name = v; }},
                {"strategies", [&](const std::string& v) { strategies_csv = v; }},
                {"eta-grid", [&](const std::string& v) { eta_spec = v; }},
                {"seeds", [&](const std::string& v) { seeds_spec = v; }},
                {"schedule", [&](const std::string& v) { schedule_name = v; }},
                {"out-dir", [&](const std::string& v) { out_dir_flag = v; }},
                {"name", [&](const std::string& v) { base_name = v; }},
                {"stride", [&](const std::string& v) { stride = std::stoi(v); }},
                {"threads", [&](const std::string& v) { threads = std::stoi(v); }},
                {"normalize", [&](const std::string& v) { normalize = parse_bool(v); }},
                {"diagnostics", [&](const std::string& v) { diagnostics = parse_bool(v); }},
            };
        apply_config(config_path, sweep, setters);
      }
      if (data_spec.empty()) {
        std::cerr << "error: --data is required (flag or config file)\n";
        return kExitUsage;
      }

      giftrl::SweepConfig cfg;
      cfg.family = giftrl::loss_family_from_string(loss_name);
      cfg.schedule = giftrl::schedule_from_string(schedule_name);
      cfg.strategies.clear();
      for (const auto& s : split(strategies_csv, ','))
        cfg.strategies.push_back(giftrl::strategy_from_string(s));
      cfg.eta_grid = parse_eta_grid(eta_spec);
      cfg.seeds = parse_seeds(seeds_spec);
      cfg.trajectory_stride = stride;
      cfg.threads = threads;
      cfg.record_diagnostics = diagnostics;
      cfg.data = load_data(data_spec, normalize);

      const giftrl::SweepResult result = giftrl::run_sweep(cfg);

      const std::filesystem::path dir = resolve_out_dir(out_dir_flag);
      std::filesystem::create_directories(dir);
      const auto csv = (dir / (base_name + ".csv")).string();
      const auto svg = (dir / (base_name + ".svg")).string();
      giftrl::emit_csv_file(result, csv);
      giftrl::emit_svg_file(result, svg);
      std::cout << "wrote " << csv << "\nwrote " << svg << "\n";
      return kExitOk;
    }

    if (*verify) {
      std::vector<giftrl::VerifySuite> suites;
      if (suite_name == "all") {
        suites = {giftrl::VerifySuite::Conjugates, giftrl::VerifySuite::IwaOracle,
                  giftrl::VerifySuite::HInequality,
                  giftrl::VerifySuite::RegretBound, giftrl::VerifySuite::Lemmas};
      } else {
        suites = {giftrl::suite_from_string(suite_name)};
      }
      bool ok = true;
      for (const auto s : suites) {
        const giftrl::VerifyReport report = giftrl::run_suite(s, verify_seed);
        giftrl::print_report(report, std::cout);
        ok = ok && report.pass();
      }
      return ok ? kExitOk : kExitVerifyFail;
    }

    if (*plot) {
      const giftrl::SweepResult result = giftrl::parse_csv_file(csv_path);
      const std::string out = svg_path.empty()
                                  ? csv_path.substr(0, csv_path.rfind('.')) + ".svg"
                                  : svg_path;
      giftrl::emit_svg_file(result, out);
      std::cout << "wrote " << out << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    // IO-flavored failures (missing/corrupt files) land here.
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
