#include <cmath>
#include <limits>

#include "invpow/special_functions.hpp"

namespace invpow {
namespace {

// log cosh(y) without overflow.
double log_cosh(double y) {
  const double ay = std::abs(y);
  return ay + std::log1p(std::exp(-2.0 * ay)) - std::log(2.0);
}

struct LogIntegrand {
  double nu;
  double x;
  double operator()(double t) const { return -x * std::cosh(t) + log_cosh(nu * t); }
};

// Terms below exp(-kCutoff) relative to the peak do not affect a double sum.
constexpr double kCutoff = 60.0;

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x)) {
    throw DomainError("bessel_k requires finite arguments");
  }
  if (!(x > 0.0)) throw DomainError("bessel_k requires x > 0");
  nu = std::abs(nu);
  const LogIntegrand phi{nu, x};

  // Locate the peak of phi on t >= 0: phi'(t) = -x sinh t + nu tanh(nu t)
  // vanishes at most once for t > 0, and phi'(0) = 0.
  double t_peak = 0.0;
  if (nu * nu > x) {
    // phi'' (0) = nu^2 - x > 0, so the maximum sits at t > 0. Bisect phi'.
    auto dphi = [&](double t) { return -x * std::sinh(t) + nu * std::tanh(nu * t); };
    double lo = 0.0;
    double hi = std::asinh(nu / x) + 1.0;
    while (dphi(hi) > 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (dphi(mid) > 0.0 ? lo : hi) = mid;
    }
    t_peak = 0.5 * (lo + hi);
  }
  const double phi_max = phi(t_peak);

  // Truncation point: phi is eventually decreasing like -x e^t / 2.
  double t_end = t_peak + 1.0;
  while (phi(t_end) - phi_max > -kCutoff) t_end += 1.0;

  // Trapezoid on [0, t_end] for an even integrand, halving the step until the
  // sum stabilises. Odd multiples of the new step are added to the old sum.
  auto term = [&](double t) { return std::exp(phi(t) - phi_max); };
  double h = 0.25;
  std::size_t n = static_cast<std::size_t>(std::ceil(t_end / h));
  double sum = 0.5 * term(0.0);
  for (std::size_t k = 1; k <= n; ++k) sum += term(static_cast<double>(k) * h);
  double estimate = h * sum;
  for (int level = 0; level < 16; ++level) {
    h *= 0.5;
    n *= 2;
    for (std::size_t k = 1; k <= n; k += 2) sum += term(static_cast<double>(k) * h);
    const double refined = h * sum;
    const bool converged = std::abs(refined - estimate) <= 1e-13 * refined;
    estimate = refined;
    if (converged && level >= 1) return phi_max + std::log(estimate);
  }
  throw ConvergenceFailure("bessel_k trapezoid did not converge",
                           std::exp(phi_max) * estimate);
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

}  // namespace invpow
