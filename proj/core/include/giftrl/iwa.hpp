#pragma once

#include <vector>

#include "giftrl/losses.hpp"

namespace giftrl {

// Inputs of one gradient-flow update: the loss, the current forecast
// p = <q, x>, the squared feature norm, and the effective rate eta = 1/lambda.
struct IwaContext {
  ScalarLoss loss;
  double p = 0.0;
  double qnorm2 = 0.0;
  double eta = 1.0;
};

// One sampled point of the flow: time h, displacement s(h), slope s'(h).
struct FlowSample {
  double h;
  double s;
  double ds;
};

/// Total displacement coefficient s(1) of the flow
///   s'(h) = eta * l'( p - s(h) * qnorm2 ),  s(0) = 0,
/// in closed form per loss family. qnorm2 = 0 degenerates to the constant
/// slope eta * l'(p).
double iwa_scaling_closed_form(const IwaContext& ctx);

/// Numeric s(h_end) of the same flow by fixed-step RK4; the ground-truth
/// oracle for the closed forms. Throws if the trajectory leaves the loss
/// domain (logarithmic), reporting the h at which it exits.
double iwa_scaling_ode(const IwaContext& ctx, double h_end = 1.0,
                       double step = 1e-4);

/// One integration pass sampling (h, s, s') at n_samples+1 uniform times.
std::vector<FlowSample> iwa_scaling_path(const IwaContext& ctx, int n_samples,
                                         double step = 1e-4);

/// The dual-space surrogate z = (1/eta) * s(1) * q, returned as the
/// coefficient multiplying q.
double iwa_surrogate_coeff(const IwaContext& ctx);

/// Convenience: z as an explicit sparse vector (index, coeff * value).
std::vector<std::pair<int, double>> iwa_surrogate(
    const IwaContext& ctx, const std::vector<std::pair<int, double>>& q);

}  // namespace giftrl
