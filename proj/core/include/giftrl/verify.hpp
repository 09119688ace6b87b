#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace giftrl {

// Guarantee-level invariant suites runnable from the CLI (`verify`) and the
// acceptance tests. Every property uses fixed seeds and pinned tolerances.
enum class VerifySuite { Conjugates, IwaOracle, HInequality, RegretBound, Lemmas };

std::string to_string(VerifySuite s);
VerifySuite suite_from_string(const std::string& name);

struct PropertyResult {
  std::string name;
  bool pass = false;
  // Smallest margin observed: >= 0 means the property held with room,
  // in (-tol, 0) it held within tolerance, <= -tol is a failure.
  double worst_slack = 0.0;
  double tolerance = 0.0;
  std::int64_t checks = 0;
  std::string detail;  // worst-case instance, empty if all comfortable
};

struct VerifyReport {
  VerifySuite suite;
  std::vector<PropertyResult> properties;
  bool pass() const {
    for (const auto& p : properties)
      if (!p.pass) return false;
    return true;
  }
};

VerifyReport run_suite(VerifySuite suite, std::uint64_t seed = 20240801);

/// One line per property: PASS/FAIL, check count, worst slack.
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace giftrl
