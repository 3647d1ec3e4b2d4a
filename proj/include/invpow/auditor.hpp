#pragma once

#include <array>

#include "invpow/ansatz.hpp"
#include "invpow/potential.hpp"

// Consistency audit of the one-node ansatz R1(r) = (r - alpha1) exp(g(r)).
// Matching powers of r in R1'' = (V + gamma/r^2 - E) R1 gives six relations
// for five unknowns (a, b, c, E, alpha1); they cannot all hold when D != 0.
namespace invpow {

struct BConflict {
  double b_ground = 0.0;   // D sqrt(A) / (B + 2 sqrt A)
  double b_excited = 0.0;  // D sqrt(A) / (B + 4 sqrt A)
  bool conflict = false;
};

BConflict excited_b_conflict(const Potential& p);

// Residuals, in order, of
//   r^0 : -2b - 2bc + D + b^2 alpha1 + E alpha1
//   r^1 : -b^2 - E
//   r^-4: a^2 alpha1 - A alpha1
//   r^-3: -a^2 + A + 2a alpha1 - B alpha1 - 2ac alpha1
//   r^-1: 2ab - c - c^2 + C + gamma + 2bc alpha1 - D alpha1
//   r^-2: B + 2ac - 2ab alpha1 - c alpha1 + c^2 alpha1 - C alpha1 - gamma alpha1
// Throws DomainError for alpha1 = 0.
std::array<double, 6> excited_system_residual(const Potential& p,
                                              const Channel& ch, double alpha1,
                                              const AnsatzParams& params,
                                              double E);

struct AlphaWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// Radii where the ground envelope exp(g(r) - g(r_peak)) is at least
// `fraction`; a node of a physical excited state has to sit in there.
AlphaWindow node_window(const AnsatzParams& ground, double fraction = 1e-2);

struct ExcitedFit {
  AnsatzParams params;
  double energy = 0.0;
  double alpha1 = 0.0;
  double residual_norm = 0.0;
};

// Least-squares minimum of |excited_system_residual| over (a, b, c, E) and
// alpha1 in the window. Multi-start projected Levenberg-Marquardt.
ExcitedFit minimize_excited_residual(const Potential& p, const Channel& ch,
                                     const AlphaWindow& window);

struct LegacyBranches {
  double plus = 0.0;
  double minus = 0.0;
  bool minus_matches = false;
};

// E0(+/-) = -(1/16A) [C + gamma +/- sqrt((C + gamma)^2 - 2BD)]^2, compared with
// the ground energy -A D^2 / (B + 2 sqrt A)^2 to 1e-9 relative.
// Throws BranchesUndefined for a negative discriminant.
LegacyBranches legacy_energy_branches(const Potential& p, const Channel& ch);

struct AuditReport {
  double b_ground = 0.0;
  double b_excited = 0.0;
  bool b_conflict = false;
  double implied_D_ratio = 0.0;  // (c + 1) / c
  // 2b(c+1) - 2bc with ground-state b, c: the two D-determinations differ by 2b.
  double d_contradiction = 0.0;
  // With a, b, c, E fixed by the r^1, r^0, r^-3, r^-4 relations, the r^-1 and
  // r^-2 relations are each linear in alpha1 and pin it to different values.
  double alpha1_from_r_minus1 = 0.0;
  double alpha1_from_r_minus2 = 0.0;
  AlphaWindow alpha_window;
  double alpha1_at_min = 0.0;
  double system_residual_min = 0.0;
  double eq10_minus = 0.0;
  double eq10_plus = 0.0;
  bool minus_matches_eq12 = false;
};

AuditReport audit(const Potential& p, const Channel& ch);

}  // namespace invpow
