#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "invpow/ansatz.hpp"
#include "invpow/potential.hpp"

namespace invpow {

struct VerificationTolerances {
  double residual = 1e-10;
  double energy = 1e-3;  // relative
  double norm = 1e-6;
};

struct EnergyBracket {
  double lo = -0.5;
  double hi = -0.01;
};

struct VerifyOptions {
  VerificationTolerances tolerances;
  // Defaults to default_grid() unless auto_grid is set.
  std::optional<RadialGrid> grid;
  bool auto_grid = false;
  // Defaults to auto_bracket() over the grid in use.
  std::optional<EnergyBracket> bracket;
};

struct VerificationReport {
  double residual_max = 0.0;
  double shot_energy = 0.0;
  double analytic_energy = 0.0;
  double energy_rel_err = 0.0;
  double normalization_integral = 0.0;
  bool passed = false;
  RadialGrid grid{0.05, 40.0, 1e-3};
  std::vector<std::string> notes;
};

// r in [0.05, 40], step 1e-3.
RadialGrid default_grid();

// Grid sized from a closed-form solution: r_min where the envelope has fallen
// by e^-30 from its peak (capped at 0.05), r_max where it has fallen by e^-25
// (at least 40). Used for potentials far from the default scales.
RadialGrid grid_for(const ClosedFormSolution& sol);

// (min over the grid of V + gamma/r^2, -1e-8). Every bound state lies above
// the lower end.
EnergyBracket auto_bracket(const Potential& p, const Channel& ch,
                           const RadialGrid& grid);

// max over the grid of |R'' + (E - V - gamma/r^2) R| / max(1, |R''|), with
// R'' = (g'' + g'^2) R from the closed form (unnormalized R).
double ode_residual(const ClosedFormSolution& sol, const RadialGrid& grid);

struct NumerovResult {
  double energy = 0.0;
  int nodes = 0;  // interior sign changes at the converged energy
  int iterations = 0;
};

// Outward Numerov integration of R'' = -(E - V - gamma/r^2) R from
// R(r_min) = 0, R(r_min + h) = 1e-30. Returns the number of sign changes on
// the grid and, optionally, the final value R(r_max).
int numerov_nodes(const Potential& p, const Channel& ch, const RadialGrid& grid,
                  double E, double* tail = nullptr);

// Bisection in E on the ground-state criterion (the outward solution
// acquires its first node, i.e. R(r_max) changes sign) to |dE| <= tol.
// Throws NoEigenvalueInBracket when the solution is nodeless at bracket.hi and
// NotGroundState when it already has nodes at bracket.lo.
NumerovResult numerov_ground_energy(const Potential& p, const Channel& ch,
                                    const RadialGrid& grid,
                                    const EnergyBracket& bracket,
                                    double tol = 1e-8);

// Solve, then check residual, shot energy and normalization. Errors from any
// stage are recorded in notes and leave passed = false.
VerificationReport verify(const Potential& p, const Channel& ch,
                          const VerifyOptions& opts = {});

}  // namespace invpow
