#pragma once

#include <string>

#include "giftrl/losses.hpp"

namespace giftrl {

enum class Strategy { Linearized, AProx, Iwa, Proximal };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

// Everything the dual objective needs, reduced to scalars. All surrogates
// live on span{q}, so H, its minimizer, and all diagnostics only touch
// <theta,q>, ||theta||^2, ||q||^2 and the forecast p = <q,x>.
struct SurrogateInstance {
  ScalarLoss loss;
  double p = 0.0;            // <q, x>
  double theta_dot_q = 0.0;  // <theta, q>
  double norm_theta2 = 0.0;  // ||theta||^2
  double qnorm2 = 0.0;       // ||q||^2
  double lambda_next = 1.0;  // regularizer strength inside H
};

// The chosen surrogate z = coeff * q plus its dual diagnostics.
// delta = H_at_g - H_at_z (computed in cancellation-free form).
struct SurrogateDecision {
  double coeff = 0.0;
  double H_at_g = 0.0;
  double H_at_z = 0.0;
  double delta = 0.0;
};

/// H(s) = ||theta - s q||^2 / (2 lambda_next) + conj(s) for z = s*q.
/// Returns +inf outside the conjugate domain.
double eval_H(const SurrogateInstance& inst, double s);

/// H(a) - H(b) without the ||theta||^2 term (it cancels analytically),
/// so the difference stays accurate when ||theta|| is large. Both a and b
/// must be in the conjugate domain.
double eval_H_diff(const SurrogateInstance& inst, double a, double b);

/// Global minimizer of s -> eval_H(inst, s): the exact proximal/implicit
/// coefficient. Stationarity root-find with bracket expansion, tol 1e-10.
double prox_coeff(const SurrogateInstance& inst);

/// Algorithm line-6 choice of z for the given strategy, with H diagnostics.
SurrogateDecision choose_surrogate(Strategy strategy,
                                   const SurrogateInstance& inst);

}  // namespace giftrl
