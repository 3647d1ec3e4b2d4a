#include "invpow/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "invpow/special_functions.hpp"

namespace invpow {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Solves g(r) - g(r_peak) = drop on one side of the peak by bisection in ln r.
double envelope_radius(const AnsatzParams& q, double r_peak, double drop,
                       bool inner) {
  const double g_peak = log_ansatz_derivatives(q, r_peak).g;
  auto f = [&](double log_r) {
    return log_ansatz_derivatives(q, std::exp(log_r)).g - g_peak - drop;
  };
  double near = std::log(r_peak);
  double far = inner ? near - 1.0 : near + 1.0;
  while (f(far) > 0.0) far += inner ? -1.0 : 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (near + far);
    (f(mid) > 0.0 ? near : far) = mid;
  }
  return std::exp(0.5 * (near + far));
}

}  // namespace

RadialGrid default_grid() { return RadialGrid(0.05, 40.0, 1e-3); }

RadialGrid grid_for(const ClosedFormSolution& sol) {
  const double r_peak = peak_radius(sol.params);
  const double r_min = std::min(0.05, envelope_radius(sol.params, r_peak, -30.0, true));
  const double r_max = std::max(40.0, envelope_radius(sol.params, r_peak, -25.0, false));
  constexpr double kMaxSteps = 2e6;
  const double step = std::max(1e-3, (r_max - r_min) / kMaxSteps);
  return RadialGrid(r_min, r_max, step);
}

EnergyBracket auto_bracket(const Potential& p, const Channel& ch,
                           const RadialGrid& grid) {
  const double gamma = centrifugal_coefficient(ch);
  double v_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i);
    v_min = std::min(v_min, evaluate_potential(p, r) + gamma / (r * r));
  }
  return {v_min, -1e-8};
}

double ode_residual(const ClosedFormSolution& sol, const RadialGrid& grid) {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i);
    const LogDerivatives d = log_ansatz_derivatives(sol.params, r);
    const double R = std::exp(d.g);
    const double R2 = (d.d2g + d.dg * d.dg) * R;
    const double k = effective_radial_term(sol.potential, sol.channel, sol.energy, r);
    worst = std::max(worst, std::abs(R2 + k * R) / std::max(1.0, std::abs(R2)));
  }
  return worst;
}

int numerov_nodes(const Potential& p, const Channel& ch, const RadialGrid& grid,
                  double E, double* tail) {
  const double h2 = grid.step() * grid.step() / 12.0;
  auto weight = [&](std::size_t i) {
    return 1.0 + h2 * effective_radial_term(p, ch, E, grid.radius(i));
  };
  double y_prev = 0.0;
  double y = 1e-30;
  double w_prev = weight(0);
  double w = weight(1);
  int nodes = 0;
  for (std::size_t i = 2; i < grid.size(); ++i) {
    const double w_next = weight(i);
    const double y_next = ((12.0 - 10.0 * w) * y - w_prev * y_prev) / w_next;
    if ((y_next < 0.0) != (y < 0.0) && y_next != 0.0) ++nodes;
    y_prev = y;
    y = y_next;
    w_prev = w;
    w = w_next;
    if (std::abs(y) > 1e200) {
      y *= 1e-200;
      y_prev *= 1e-200;
    }
  }
  if (tail != nullptr) *tail = y;
  return nodes;
}

NumerovResult numerov_ground_energy(const Potential& p, const Channel& ch,
                                    const RadialGrid& grid,
                                    const EnergyBracket& bracket, double tol) {
  if (!(bracket.lo < bracket.hi)) {
    throw DomainError("energy bracket requires lo < hi");
  }
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (numerov_nodes(p, ch, grid, hi) == 0) {
    throw NoEigenvalueInBracket("outward solution is nodeless at the upper energy");
  }
  const int nodes_lo = numerov_nodes(p, ch, grid, lo);
  if (nodes_lo > 0) {
    throw NotGroundState("solution already has " + std::to_string(nodes_lo) +
                         " node(s) at the lower energy");
  }
  NumerovResult out;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (numerov_nodes(p, ch, grid, mid) == 0 ? lo : hi) = mid;
    ++out.iterations;
  }
  out.energy = 0.5 * (lo + hi);
  out.nodes = numerov_nodes(p, ch, grid, lo);
  return out;
}

VerificationReport verify(const Potential& p, const Channel& ch,
                          const VerifyOptions& opts) {
  VerificationReport report;
  report.shot_energy = kNaN;
  report.analytic_energy = kNaN;
  report.energy_rel_err = kNaN;
  report.normalization_integral = kNaN;
  report.residual_max = kNaN;

  std::optional<ClosedFormSolution> sol;
  try {
    sol = solve_closed_form(p, ch);
  } catch (const Error& e) {
    report.notes.push_back(std::string(e.kind()) + ": " + e.what());
    return report;
  }
  report.analytic_energy = sol->energy;

  if (opts.grid) {
    report.grid = *opts.grid;
  } else if (opts.auto_grid) {
    report.grid = grid_for(*sol);
  } else {
    report.grid = default_grid();
  }

  report.residual_max = ode_residual(*sol, report.grid);

  try {
    const EnergyBracket bracket =
        opts.bracket ? *opts.bracket : auto_bracket(p, ch, report.grid);
    const NumerovResult shot = numerov_ground_energy(p, ch, report.grid, bracket);
    report.shot_energy = shot.energy;
    report.energy_rel_err = std::abs(shot.energy - sol->energy) / std::abs(sol->energy);
  } catch (const Error& e) {
    report.notes.push_back(std::string(e.kind()) + ": " + e.what());
  }

  try {
    QuadratureOptions q;
    q.rel_tol = 1e-10;
    q.scale = peak_radius(sol->params);
    const auto density = [&](double r) {
      const double R = radial_wavefunction(*sol, r, true);
      return R * R;
    };
    report.normalization_integral = integrate_adaptive(density, 0.0, INFINITY, q).value;
  } catch (const Error& e) {
    report.notes.push_back(std::string(e.kind()) + ": " + e.what());
  }

  const VerificationTolerances& tol = opts.tolerances;
  report.passed = report.residual_max <= tol.residual &&
                  report.energy_rel_err <= tol.energy &&
                  std::abs(report.normalization_integral - 1.0) <= tol.norm;
  return report;
}

}  // namespace invpow
