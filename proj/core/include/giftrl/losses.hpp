#pragma once

#include <limits>
#include <string>

namespace giftrl {

enum class LossFamily { Squared, Logistic, Exponential, Logarithmic };

std::string to_string(LossFamily f);
LossFamily loss_family_from_string(const std::string& name);

// One round's scalar loss: an importance-weighted 1D loss applied to the
// forecast p. Labels: Squared takes any real, Logistic/Exponential take
// +-1, Logarithmic takes {0,1}. The weight scales the whole loss, and the
// conjugate uses the perspective identity (h*f)^*(s) = h*f^*(s/h).
struct ScalarLoss {
  LossFamily family = LossFamily::Squared;
  double label = 0.0;
  double weight = 1.0;

  ScalarLoss() = default;
  ScalarLoss(LossFamily f, double y, double h = 1.0);

  // Prediction domain: (0,1) for Logarithmic, all reals otherwise.
  bool in_domain(double p) const;

  double value(double p) const;
  double d1(double p) const;
  double d2(double p) const;
  double d3(double p) const;

  // Fenchel conjugate sup_p { s*p - value(p) }, with boundary values taken
  // as limits. Returns +inf outside the conjugate domain.
  double conjugate(double s) const;

  // Derivative of the conjugate where finite (the inverse-gradient map;
  // flattened boundary pieces for Logarithmic).
  double conjugate_d1(double s) const;

  // True iff conjugate(s) is finite.
  bool conjugate_finite(double s) const;

  // Independent numeric supremum of s*p - value(p) over a widened bracket.
  // Validation oracle for conjugate(); not used by any production path.
  double conjugate_oracle(double s) const;
};

// Free-function aliases matching the operation names used throughout.
inline double loss_value(const ScalarLoss& l, double p) { return l.value(p); }
inline double loss_d1(const ScalarLoss& l, double p) { return l.d1(p); }
inline double loss_d2(const ScalarLoss& l, double p) { return l.d2(p); }
inline double loss_d3(const ScalarLoss& l, double p) { return l.d3(p); }
inline double conjugate(const ScalarLoss& l, double s) { return l.conjugate(s); }
inline double conjugate_oracle(const ScalarLoss& l, double s) {
  return l.conjugate_oracle(s);
}

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

}  // namespace giftrl
