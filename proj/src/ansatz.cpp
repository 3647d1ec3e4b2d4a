#include "invpow/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invpow/special_functions.hpp"

namespace invpow {
namespace {

void require_constraint(const Potential& p, const Channel& ch) {
  const double residual = constraint_c(p.A(), p.B(), p.D(), ch) - p.C();
  if (!(std::abs(residual) <= kConstraintTolerance)) {
    throw ConstraintUnsatisfied(residual);
  }
}

// Root of a monotone-bracketed function; returns the endpoint with the
// smaller |f| once the bracket can no longer be split.
template <class F>
double bisect(const F& f, double lo, double hi, double f_lo) {
  double f_hi = f(hi);
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }
  return std::abs(f_lo) <= std::abs(f_hi) ? lo : hi;
}

// Critical points of B -> constraint_c. With u = B + 2 sqrt A the derivative
// vanishes where h(u) = u^3 - sqrt(A) u^2 - 4 A^2 D = 0. For D < 0, h(0) > 0,
// h has its minimum at u0 = 2 sqrt(A) / 3 and h(sqrt A) > 0, so there are
// either zero or two positive roots, one on each side of u0.
std::vector<double> constraint_critical_points(double A, double D) {
  std::vector<double> out;
  const double sA = std::sqrt(A);
  auto h = [&](double u) { return (u - sA) * u * u - 4.0 * A * A * D; };
  const double u0 = 2.0 * sA / 3.0;
  const double h0 = h(u0);
  if (!(h0 < 0.0) || !(D < 0.0)) return out;
  out.push_back(bisect(h, 0.0, u0, h(0.0)) - 2.0 * sA);
  out.push_back(bisect(h, u0, sA, h0) - 2.0 * sA);
  return out;
}

}  // namespace

double constraint_c(double A, double B, double D, const Channel& ch) {
  if (!(A > 0.0)) throw DomainError("constraint_c requires A > 0");
  const double sA = std::sqrt(A);
  const double pole = B + 2.0 * sA;
  if (pole == 0.0) throw DomainError("constraint_c singular at B = -2 sqrt(A)");
  if (!(pole > 0.0)) throw DomainError("constraint_c requires B > -2 sqrt(A)");
  return B * B / (4.0 * A) + B / (2.0 * sA) + 2.0 * A * D / pole -
         centrifugal_coefficient(ch);
}

AnsatzParams solve_ansatz(const Potential& p, const Channel& ch) {
  require_constraint(p, ch);
  const double sA = std::sqrt(p.A());
  const double pole = p.B() + 2.0 * sA;
  return {-sA, p.D() * sA / pole, pole / (2.0 * sA)};
}

double ground_energy(const Potential& p, const Channel& ch) {
  require_constraint(p, ch);
  const double A = p.A();
  const double B = p.B();
  return -A * p.D() * p.D() / (B * B + 4.0 * A + 4.0 * B * std::sqrt(A));
}

BRoots solve_b(double A, double C, double D, const Channel& ch,
               const BracketOptions& opts) {
  if (!(A > 0.0)) throw DomainError("solve_b requires A > 0");
  if (!(D < 0.0)) throw DomainError("solve_b requires D < 0");
  if (!(opts.lower_offset > 0.0) || opts.panels == 0) {
    throw DomainError("solve_b requires a positive lower offset and panels");
  }
  const double lo = -2.0 * std::sqrt(A) + opts.lower_offset;
  const double hi = opts.upper;
  if (!(hi > lo)) throw DomainError("solve_b bracket is empty");

  auto f = [&](double B) { return constraint_c(A, B, D, ch) - C; };

  std::vector<double> nodes;
  nodes.reserve(opts.panels + 3);
  for (std::size_t i = 0; i <= opts.panels; ++i) {
    nodes.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(opts.panels));
  }
  for (double crit : constraint_critical_points(A, D)) {
    if (crit > lo && crit < hi) nodes.push_back(crit);
  }
  std::sort(nodes.begin(), nodes.end());

  BRoots out;
  double x_prev = nodes.front();
  double f_prev = f(x_prev);
  if (f_prev == 0.0) out.roots.push_back(x_prev);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double x = nodes[i];
    const double fx = f(x);
    if (fx == 0.0) {
      out.roots.push_back(x);
    } else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      out.roots.push_back(bisect(f, x_prev, x, f_prev));
    }
    x_prev = x;
    f_prev = fx;
  }
  if (out.roots.empty()) {
    throw NoRootFound("no B in bracket satisfies the constraint for C=" +
                      std::to_string(C));
  }
  out.multiple = out.roots.size() > 1;
  return out;
}

double select_default_root(const BRoots& roots) {
  if (roots.roots.empty()) throw NoRootFound("empty root set");
  for (double r : roots.roots) {
    if (r > 0.0) return r;
  }
  return roots.roots.back();
}

LogDerivatives log_ansatz_derivatives(const AnsatzParams& q, double r) {
  if (!(r > 0.0)) throw DomainError("log_ansatz_derivatives requires r > 0");
  const double inv = 1.0 / r;
  return {q.a * inv + q.b * r + q.c * std::log(r),
          -q.a * inv * inv + q.b + q.c * inv,
          2.0 * q.a * inv * inv * inv - q.c * inv * inv};
}

double peak_radius(const AnsatzParams& q) {
  if (!(q.a < 0.0) || !(q.b < 0.0)) {
    throw DomainError("peak_radius requires a < 0 and b < 0");
  }
  const double disc = q.c * q.c + 4.0 * q.a * q.b;
  if (disc < 0.0) throw NoInteriorPeak("g'(r) has no positive zero");
  return (-q.c - std::sqrt(disc)) / (2.0 * q.b);
}

double log_norm_integral(const AnsatzParams& q) {
  if (!(q.a < 0.0) || !(q.b < 0.0) || !(2.0 * q.c + 1.0 > 0.0)) {
    throw DomainError("normalization requires a < 0, b < 0, 2c + 1 > 0");
  }
  const double nu = 2.0 * q.c + 1.0;
  return std::log(2.0) + 0.5 * nu * std::log(q.a / q.b) +
         log_bessel_k(nu, 4.0 * std::sqrt(q.a * q.b));
}

double normalization_constant(const AnsatzParams& q) {
  return std::exp(-0.5 * log_norm_integral(q));
}

ClosedFormSolution solve_closed_form(const Potential& p, const Channel& ch) {
  const AnsatzParams params = solve_ansatz(p, ch);
  return {p, ch, params, ground_energy(p, ch), normalization_constant(params)};
}

double radial_wavefunction(const ClosedFormSolution& sol, double r,
                           bool normalized) {
  if (!(r > 0.0)) throw DomainError("radial_wavefunction requires r > 0");
  double log_r = log_ansatz_derivatives(sol.params, r).g;
  if (normalized) log_r += std::log(sol.normalization);
  return std::exp(log_r);
}

std::array<double, 5> check_matching_system(const AnsatzParams& q,
                                            const Potential& p,
                                            const Channel& ch) {
  const double pole = p.B() + 2.0 * std::sqrt(p.A());
  const double E = -p.A() * p.D() * p.D() / (pole * pole);
  const double gamma = centrifugal_coefficient(ch);
  return {q.a * q.a - p.A(), q.b * q.b + E, 2.0 * q.b * q.c - p.D(),
          2.0 * q.a * (1.0 - q.c) - p.B(),
          (q.c * q.c - q.c - 2.0 * q.a * q.b) - (p.C() + gamma)};
}

}  // namespace invpow
