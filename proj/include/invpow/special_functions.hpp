#pragma once

#include <cstddef>
#include <functional>

#include "invpow/errors.hpp"

namespace invpow {

// Modified Bessel function of the second kind K_nu(x), real order.
//
// Evaluated from K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt with the
// trapezoidal rule, which converges geometrically for this entire, doubly
// exponentially decaying integrand. The sum is accumulated relative to the
// peak of the log-integrand, so log_bessel_k stays finite where K_nu itself
// would overflow or underflow. Negative orders use K_{-nu} = K_nu.
double bessel_k(double nu, double x);
double log_bessel_k(double nu, double x);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_subdivisions = 4000;
  // Length scale of the map r = lo + scale * t / (1 - t) used when hi is
  // +inf. Set it near where the integrand lives.
  double scale = 1.0;
};

// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [lo, hi].
// hi may be +infinity. Converged when the summed error estimate is below
// max(rel_tol * |value|, abs_tol). Throws ConvergenceFailure (carrying the
// best estimate) when the subdivision budget runs out.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    const QuadratureOptions& opts = {});

inline QuadratureResult integrate_adaptive(
    const std::function<double(double)>& f, double lo, double hi, double tol) {
  QuadratureOptions opts;
  opts.rel_tol = tol;
  return integrate_adaptive(f, lo, hi, opts);
}

}  // namespace invpow
