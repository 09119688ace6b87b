#pragma once

#include <functional>
#include <stdexcept>

namespace giftrl {

// Interval for the 1D solvers. lo < hi; the target function must change
// sign on [lo, hi] in root mode.
struct Bracket {
  double lo;
  double hi;
};

/// Principal-branch Lambert W: returns w >= -1 with w*e^w = x.
/// Throws std::domain_error for x < -1/e.
double lambert_w(double x);

/// W(e^a) without forming e^a. Solves w + ln w = a in log domain, so it
/// stays finite for a far beyond the overflow threshold of e^a.
double lambert_w_exp(double a);

/// ln W(e^a): the solution v of v + e^v = a. This is the numerically
/// stable primitive behind lambert_w_exp (W(e^a) = a - v exactly).
double ln_lambert_w_exp(double a);

/// Root of f on the bracket (f must change sign). Bisection with secant
/// acceleration; stops when |f| <= tol or the bracket width <= tol.
/// Throws std::invalid_argument if f does not change sign, and
/// std::runtime_error after 200 iterations without convergence.
double solve_1d(const std::function<double(double)>& f, Bracket bracket,
                double tol);

/// Classical fixed-step RK4 for s' = rhs(h, s), s(0) = 0, integrated from
/// 0 to h_end. Throws std::runtime_error if the rhs turns non-finite
/// (loss-domain violation along the trajectory).
double integrate_ode(const std::function<double(double, double)>& rhs,
                     double h_end, double step);

/// Same integration, but also invokes observe(h, s) at h = 0 and after
/// every accepted step. Used by the trajectory-shape suites.
double integrate_ode(const std::function<double(double, double)>& rhs,
                     double h_end, double step,
                     const std::function<void(double, double)>& observe);

/// Golden-section maximizer of f on [lo, hi] to the given bracket width.
/// Returns the maximizing argument (f assumed unimodal on the bracket).
double maximize_1d(const std::function<double(double)>& f, double lo,
                   double hi, double tol);

}  // namespace giftrl
