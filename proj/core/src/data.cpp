#include "giftrl/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "giftrl/rng.hpp"

namespace giftrl {

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double dot(const std::vector<double>& dense, const SparseVec& sv) {
  double acc = 0.0;
  for (const auto& f : sv) acc += dense[f.index] * f.value;
  return acc;
}

double norm2(const SparseVec& sv) {
  double acc = 0.0;
  for (const auto& f : sv) acc += f.value * f.value;
  return acc;
}

std::string to_string(Task t) {
  switch (t) {
    case Task::Regression: return "regression";
    case Task::BinaryPM1: return "binary_pm1";
    case Task::Binary01: return "binary_01";
  }
  return "?";
}

namespace {

double parse_double(std::string_view tok, int line_no, const char* what) {
  const std::string_view body =
      !tok.empty() && tok.front() == '+' ? tok.substr(1) : tok;  // "+1" labels
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), v);
  if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size())
    throw ParseError(line_no, std::string("bad ") + what + " token '" +
                                  std::string(tok) + "'");
  return v;
}

int parse_index(std::string_view tok, int line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 1)
    throw ParseError(line_no, "bad feature index '" + std::string(tok) + "'");
  return v;
}

Task infer_task(const std::vector<Example>& examples) {
  bool pm1 = true, b01 = true;
  for (const auto& ex : examples) {
    pm1 = pm1 && (ex.label == 1.0 || ex.label == -1.0);
    b01 = b01 && (ex.label == 0.0 || ex.label == 1.0);
  }
  if (pm1) return Task::BinaryPM1;
  if (b01) return Task::Binary01;
  return Task::Regression;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, int dim_hint) {
  Dataset ds;
  std::string line;
  int line_no = 0;
  int max_index = 0;
  bool any_record = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank or comment-only line
    any_record = true;

    Example ex;
    ex.label = parse_double(tok, line_no, "label");
    int prev_index = 0;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError(line_no, "expected idx:val, got '" + tok + "'");
      const int idx = parse_index(std::string_view(tok).substr(0, colon), line_no);
      if (idx <= prev_index)
        throw ParseError(line_no, "feature indices not strictly increasing");
      prev_index = idx;
      const double val =
          parse_double(std::string_view(tok).substr(colon + 1), line_no, "value");
      ex.features.push_back({idx - 1, val});
      max_index = std::max(max_index, idx);
    }
    if (dim_hint > 0 && prev_index > dim_hint)
      throw ParseError(line_no, "feature index exceeds supplied dim");
    ds.examples.push_back(std::move(ex));
  }
  if (!any_record) throw ParseError(0, "empty file");
  ds.dim = dim_hint > 0 ? dim_hint : max_index;
  ds.task = infer_task(ds.examples);
  return ds;
}

Dataset parse_libsvm_file(const std::string& path, int dim_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in, dim_hint);
}

void serialize_libsvm(const Dataset& ds, std::ostream& out) {
  char buf[64];
  const auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
    (void)ec;
  };
  for (const auto& ex : ds.examples) {
    put(ex.label);
    for (const auto& f : ex.features) {
      out.put(' ');
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, f.index + 1);
      out.write(buf, ptr - buf);
      (void)ec;
      out.put(':');
      put(f.value);
    }
    out.put('\n');
  }
}

Dataset normalize_and_bias(const Dataset& ds) {
  if (ds.examples.empty())
    throw std::invalid_argument("normalize_and_bias: empty dataset");
  std::vector<double> col_max(ds.dim, 0.0);
  for (const auto& ex : ds.examples)
    for (const auto& f : ex.features)
      col_max[f.index] = std::max(col_max[f.index], std::abs(f.value));

  Dataset out = ds;
  for (auto& ex : out.examples) {
    for (auto& f : ex.features)
      if (col_max[f.index] > 0.0) f.value /= col_max[f.index];
    ex.features.push_back({ds.dim, 1.0});  // bias
  }
  out.dim = ds.dim + 1;
  return out;
}

Dataset shuffle(const Dataset& ds, std::uint64_t seed) {
  Dataset out = ds;
  Rng rng(seed);
  for (std::size_t i = out.examples.size(); i > 1; --i) {
    const std::size_t j = rng.next_below(i);
    std::swap(out.examples[i - 1], out.examples[j]);
  }
  return out;
}

Dataset synth_dataset(Task task, int n, int d, double noise,
                      std::uint64_t seed) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("synth_dataset: n, d must be >= 1");
  Rng rng(seed);
  Dataset ds;
  ds.dim = d;
  ds.task = task;
  ds.comparator.resize(d);
  for (auto& w : ds.comparator) w = rng.next_gaussian();

  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  ds.examples.reserve(n);
  for (int i = 0; i < n; ++i) {
    Example ex;
    ex.features.reserve(d);
    double margin = 0.0;
    for (int j = 0; j < d; ++j) {
      const double v = rng.next_gaussian() * scale;
      ex.features.push_back({j, v});
      margin += ds.comparator[j] * v;
    }
    const double noisy = margin + noise * rng.next_gaussian();
    switch (task) {
      case Task::Regression: ex.label = noisy; break;
      case Task::BinaryPM1: ex.label = noisy >= 0.0 ? 1.0 : -1.0; break;
      case Task::Binary01: ex.label = noisy >= 0.0 ? 1.0 : 0.0; break;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace giftrl
