#include "invpow/auditor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace invpow {
namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Jac = Eigen::Matrix<double, 6, 5>;

// Unknowns packed as (a, b, c, E, alpha1).
struct ExcitedSystem {
  double A, B, C, D, gamma;

  Vec6 residual(const Vec5& x) const {
    const double a = x[0], b = x[1], c = x[2], E = x[3], al = x[4];
    const double Cg = C + gamma;
    Vec6 r;
    r << -2 * b - 2 * b * c + D + b * b * al + E * al,
        -b * b - E,
        a * a * al - A * al,
        -a * a + A + 2 * a * al - B * al - 2 * a * c * al,
        2 * a * b - c - c * c + Cg + 2 * b * c * al - D * al,
        B + 2 * a * c - 2 * a * b * al - c * al + c * c * al - Cg * al;
    return r;
  }

  Jac jacobian(const Vec5& x) const {
    const double a = x[0], b = x[1], c = x[2], E = x[3], al = x[4];
    const double Cg = C + gamma;
    Jac J;
    J << 0, -2 - 2 * c + 2 * b * al, -2 * b, al, b * b + E,
        0, -2 * b, 0, -1, 0,
        2 * a * al, 0, 0, 0, a * a - A,
        -2 * a + 2 * al - 2 * c * al, 0, -2 * a * al, 0, 2 * a - B - 2 * a * c,
        2 * b, 2 * a + 2 * c * al, -1 - 2 * c + 2 * b * al, 0, 2 * b * c - D,
        2 * c - 2 * b * al, -2 * a * al, 2 * a - al + 2 * c * al, 0,
        -2 * a * b - c + c * c - Cg;
    return J;
  }
};

// Levenberg-Marquardt with alpha1 boxed to [lo, hi]. When a step would leave
// the box, alpha1 is pinned to the bound and the remaining four unknowns are
// solved for instead.
Vec5 levenberg_marquardt(const ExcitedSystem& sys, Vec5 x, double lo, double hi) {
  double lambda = 1e-3;
  double cost = sys.residual(x).squaredNorm();
  for (int iter = 0; iter < 400; ++iter) {
    const Vec6 r = sys.residual(x);
    const Jac J = sys.jacobian(x);
    const Eigen::Matrix<double, 5, 5> JtJ = J.transpose() * J;
    const Vec5 g = J.transpose() * r;

    auto damped_step = [&](int n) -> Vec5 {
      Eigen::MatrixXd M = JtJ.topLeftCorner(n, n);
      M.diagonal() += lambda * (M.diagonal().array() + 1e-12).matrix();
      Vec5 step = Vec5::Zero();
      step.head(n) = M.ldlt().solve(-g.head(n));
      return step;
    };

    Vec5 trial = x + damped_step(5);
    if (trial[4] < lo || trial[4] > hi) {
      const double bound = trial[4] < lo ? lo : hi;
      trial = x + damped_step(4);
      trial[4] = bound;
    }
    const double trial_cost = sys.residual(trial).squaredNorm();
    if (trial_cost < cost) {
      const double gain = cost - trial_cost;
      x = trial;
      cost = trial_cost;
      lambda = std::max(lambda / 3.0, 1e-12);
      if (gain <= 1e-16 * cost + 1e-30) break;
    } else {
      lambda *= 4.0;
      if (lambda > 1e12) break;
    }
  }
  return x;
}

double ground_pole(const Potential& p) { return p.B() + 2.0 * std::sqrt(p.A()); }

}  // namespace

BConflict excited_b_conflict(const Potential& p) {
  const double sA = std::sqrt(p.A());
  BConflict out;
  out.b_ground = p.D() * sA / (p.B() + 2.0 * sA);
  out.b_excited = p.D() * sA / (p.B() + 4.0 * sA);
  out.conflict = std::abs(out.b_ground - out.b_excited) > 1e-12 * std::abs(out.b_ground);
  return out;
}

std::array<double, 6> excited_system_residual(const Potential& p,
                                              const Channel& ch, double alpha1,
                                              const AnsatzParams& q, double E) {
  if (alpha1 == 0.0) throw DomainError("excited ansatz requires alpha1 != 0");
  const ExcitedSystem sys{p.A(), p.B(), p.C(), p.D(), centrifugal_coefficient(ch)};
  Vec5 x;
  x << q.a, q.b, q.c, E, alpha1;
  const Vec6 r = sys.residual(x);
  return {r[0], r[1], r[2], r[3], r[4], r[5]};
}

AlphaWindow node_window(const AnsatzParams& ground, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DomainError("node_window fraction must lie in (0, 1)");
  }
  const double r_peak = peak_radius(ground);
  const double g_peak = log_ansatz_derivatives(ground, r_peak).g;
  const double drop = std::log(fraction);
  auto excess = [&](double r) {
    return log_ansatz_derivatives(ground, r).g - g_peak - drop;
  };
  auto solve = [&](double inside, double outside) {
    while (excess(outside) > 0.0) outside = outside < inside ? outside / 2.0 : outside * 2.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (inside + outside);
      (excess(mid) > 0.0 ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  return {solve(r_peak, r_peak / 2.0), solve(r_peak, r_peak * 2.0)};
}

ExcitedFit minimize_excited_residual(const Potential& p, const Channel& ch,
                                     const AlphaWindow& window) {
  if (!(window.lo > 0.0 && window.hi > window.lo)) {
    throw DomainError("alpha1 window must satisfy 0 < lo < hi");
  }
  const ExcitedSystem sys{p.A(), p.B(), p.C(), p.D(), centrifugal_coefficient(ch)};
  const double sA = std::sqrt(p.A());
  const double c_ground = ground_pole(p) / (2.0 * sA);
  const BConflict bs = excited_b_conflict(p);

  const std::vector<double> a_seeds = {-sA, sA};
  const std::vector<double> b_seeds = {bs.b_ground, bs.b_excited, -bs.b_ground};
  const std::vector<double> c_seeds = {c_ground, 1.0 - c_ground, 1.0, -1.0};
  constexpr int kAlphaSeeds = 25;

  ExcitedFit best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kAlphaSeeds; ++k) {
    const double t = static_cast<double>(k) / (kAlphaSeeds - 1);
    const double alpha = window.lo * std::pow(window.hi / window.lo, t);
    for (double a : a_seeds) {
      for (double b : b_seeds) {
        for (double c : c_seeds) {
          Vec5 x;
          x << a, b, c, -b * b, alpha;
          x = levenberg_marquardt(sys, x, window.lo, window.hi);
          const double norm = sys.residual(x).norm();
          if (norm < best.residual_norm) {
            best = {{x[0], x[1], x[2]}, x[3], x[4], norm};
          }
        }
      }
    }
  }
  return best;
}

LegacyBranches legacy_energy_branches(const Potential& p, const Channel& ch) {
  const double cg = p.C() + centrifugal_coefficient(ch);
  const double disc = cg * cg - 2.0 * p.B() * p.D();
  if (disc < 0.0) {
    throw BranchesUndefined("negative discriminant (C+gamma)^2 - 2BD");
  }
  const double root = std::sqrt(disc);
  LegacyBranches out;
  out.plus = -(cg + root) * (cg + root) / (16.0 * p.A());
  out.minus = -(cg - root) * (cg - root) / (16.0 * p.A());
  const double pole = ground_pole(p);
  const double ground = -p.A() * p.D() * p.D() / (pole * pole);
  out.minus_matches = std::abs(out.minus - ground) <= 1e-9 * std::abs(ground);
  return out;
}

AuditReport audit(const Potential& p, const Channel& ch) {
  AuditReport report;
  const BConflict bs = excited_b_conflict(p);
  report.b_ground = bs.b_ground;
  report.b_excited = bs.b_excited;
  report.b_conflict = bs.conflict;

  const double sA = std::sqrt(p.A());
  const double gamma = centrifugal_coefficient(ch);
  const double c = ground_pole(p) / (2.0 * sA);
  report.implied_D_ratio = (c + 1.0) / c;
  report.d_contradiction = 2.0 * bs.b_ground * (c + 1.0) - 2.0 * bs.b_ground * c;

  // Forced values for alpha1 != 0: a = -sqrt A, same c, b = b_excited, E = -b^2.
  const double a = -sA;
  const double b = bs.b_excited;
  report.alpha1_from_r_minus1 =
      -(2 * a * b - c - c * c + p.C() + gamma) / (2 * b * c - p.D());
  report.alpha1_from_r_minus2 =
      -(p.B() + 2 * a * c) / (c * c - c - 2 * a * b - p.C() - gamma);

  const AnsatzParams ground{a, bs.b_ground, c};
  report.alpha_window = node_window(ground);
  const ExcitedFit fit = minimize_excited_residual(p, ch, report.alpha_window);
  report.alpha1_at_min = fit.alpha1;
  report.system_residual_min = fit.residual_norm;

  const LegacyBranches branches = legacy_energy_branches(p, ch);
  report.eq10_minus = branches.minus;
  report.eq10_plus = branches.plus;
  report.minus_matches_eq12 = branches.minus_matches;
  return report;
}

}  // namespace invpow
