#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "invpow/potential.hpp"

namespace invpow {

// Parameters of the logarithmic ansatz g(r) = a/r + b r + c ln r, with the
// ground state R(r) = exp(g(r)) = r^c exp(a/r + b r).
struct AnsatzParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct ClosedFormSolution {
  Potential potential;
  Channel channel;
  AnsatzParams params;
  double energy = 0.0;
  double normalization = 0.0;
};

struct LogDerivatives {
  double g = 0.0;
  double dg = 0.0;
  double d2g = 0.0;
};

// Absolute tolerance on |constraint_c(A, B, D, ch) - C| accepted as a solution.
inline constexpr double kConstraintTolerance = 1e-9;

// C value for which the ansatz solves the radial equation:
//   B^2/(4A) + B/(2 sqrt A) + 2AD/(B + 2 sqrt A) - gamma.
double constraint_c(double A, double B, double D, const Channel& ch);

// a = -sqrt(A), c = (B + 2 sqrt A) / (2 sqrt A), b = D sqrt(A) / (B + 2 sqrt A).
// Throws ConstraintUnsatisfied when C misses the constraint by more than
// kConstraintTolerance.
AnsatzParams solve_ansatz(const Potential& p, const Channel& ch);

// E = -A D^2 / (B^2 + 4A + 4B sqrt A); same preconditions as solve_ansatz.
double ground_energy(const Potential& p, const Channel& ch);

struct BracketOptions {
  // Lower end is -2 sqrt(A) + lower_offset; the constraint has a pole there.
  double lower_offset = 1e-6;
  double upper = 1e3;
  std::size_t panels = 10000;
};

struct BRoots {
  std::vector<double> roots;  // increasing
  bool multiple = false;
};

// All B in the bracket with constraint_c(A, B, D, ch) = C. Critical points of
// the constraint are added to the uniform sign-change scan, so each panel is
// monotone and every simple root is isolated before bisection.
// Throws NoRootFound when no sign change exists.
BRoots solve_b(double A, double C, double D, const Channel& ch,
               const BracketOptions& opts = {});

// Smallest positive root, or the largest root when none is positive.
double select_default_root(const BRoots& roots);

LogDerivatives log_ansatz_derivatives(const AnsatzParams& params, double r);

// Radius where g'(r) = 0, i.e. the positive root of b r^2 + c r - a = 0.
double peak_radius(const AnsatzParams& params);

// N = I^{-1/2}, I = 2 (a/b)^{(2c+1)/2} K_{2c+1}(4 sqrt(ab)) = int_0^inf R^2 dr.
double normalization_constant(const AnsatzParams& params);
double log_norm_integral(const AnsatzParams& params);

// Solves params, energy and normalization together.
ClosedFormSolution solve_closed_form(const Potential& p, const Channel& ch);

// (N if normalized else 1) * r^c * exp(a/r + b r), evaluated as exp of the log.
double radial_wavefunction(const ClosedFormSolution& sol, double r,
                           bool normalized);

// Residuals of the coefficient-matching system
//   [a^2 - A, b^2 + E, 2bc - D, 2a(1-c) - B, (c^2 - c - 2ab) - (C + gamma)]
// with E = ground energy of p (E = -A D^2 / (B + 2 sqrt A)^2).
std::array<double, 5> check_matching_system(const AnsatzParams& params,
                                            const Potential& p,
                                            const Channel& ch);

}  // namespace invpow
