#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace giftrl {

struct Feature {
  int index;     // 0-based internally (files are 1-based)
  double value;
  bool operator==(const Feature&) const = default;
};

using SparseVec = std::vector<Feature>;

double dot(const std::vector<double>& dense, const SparseVec& sv);
double norm2(const SparseVec& sv);

struct Example {
  SparseVec features;  // indices strictly increasing
  double label = 0.0;
  double weight = 1.0;
  bool operator==(const Example&) const = default;
};

enum class Task { Regression, BinaryPM1, Binary01 };

std::string to_string(Task t);

struct Dataset {
  std::vector<Example> examples;
  int dim = 0;
  Task task = Task::Regression;
  std::vector<double> comparator;  // generating weights of synthetic data

  std::size_t size() const { return examples.size(); }
  bool operator==(const Dataset& o) const {
    return examples == o.examples && dim == o.dim && task == o.task;
  }
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

/// Parses LibSVM text: `label idx:val idx:val ...` with `#` comments.
/// File indices are 1-based; dim is inferred from the max index unless a
/// positive dim_hint is supplied (then a single pass suffices and records
/// may not exceed it). Labels decide the task: all in {-1,+1} -> BinaryPM1,
/// all in {0,1} -> Binary01, otherwise Regression.
Dataset parse_libsvm(std::istream& in, int dim_hint = 0);
Dataset parse_libsvm_file(const std::string& path, int dim_hint = 0);

/// Writes the dataset back out in LibSVM text form (1-based indices).
void serialize_libsvm(const Dataset& ds, std::ostream& out);

/// Scales every feature column by 1/max|value| (all-zero columns are left
/// alone) and appends a constant bias feature with value 1 at index dim.
Dataset normalize_and_bias(const Dataset& ds);

/// Deterministic Fisher-Yates permutation of the examples driven by
/// splitmix64; identical order for identical seeds on any platform.
Dataset shuffle(const Dataset& ds, std::uint64_t seed);

/// Seeded synthetic data: dense features ~ N(0,1)/sqrt(d), generating
/// weights w* ~ N(0,1) recorded as the dataset comparator.
///   Regression: y = <w*,q> + noise*N(0,1)
///   BinaryPM1:  y = sign(<w*,q> + noise*N(0,1)) in {-1,+1}
///   Binary01:   same sign test mapped to {0,1}
Dataset synth_dataset(Task task, int n, int d, double noise,
                      std::uint64_t seed);

}  // namespace giftrl
