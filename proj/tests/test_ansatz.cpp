#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "invpow/ansatz.hpp"
#include "invpow/special_functions.hpp"
#include "test_support.hpp"

using namespace invpow;
using namespace invpow::testing;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Channel k3d = Channel::three_d(0);
const Channel k2d = Channel::two_d(0);

double max_abs(const std::array<double, 5>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("ansatz: parameters for the reference cases", "[ansatz]") {
  const auto p3 = rounded_reference_potential(5.87, k3d);
  const AnsatzParams q3 = solve_ansatz(p3, k3d);
  CHECK(q3.a == -2.0);
  CHECK_THAT(q3.c, WithinAbs(2.46750, 1e-12));
  CHECK_THAT(q3.b, WithinAbs(-0.405268, 1e-6));
  CHECK(max_abs(check_matching_system(q3, p3, k3d)) < 1e-12);

  const auto p2 = rounded_reference_potential(5.65, k2d);
  const AnsatzParams q2 = solve_ansatz(p2, k2d);
  CHECK(q2.a == -2.0);
  CHECK_THAT(q2.c, WithinAbs(2.41250, 1e-12));
  CHECK_THAT(q2.b, WithinAbs(-0.414508, 1e-6));
  CHECK(max_abs(check_matching_system(q2, p2, k2d)) < 1e-12);

  // a = -sqrt(A) whatever the other coefficients are.
  const auto other = rounded_reference_potential(0.3, Channel::three_d(2));
  CHECK(solve_ansatz(other, Channel::three_d(2)).a == -2.0);
}

TEST_CASE("ansatz: constraint violations are reported with the residual", "[ansatz]") {
  const auto off = Potential::checked(4.0, 5.87, 99.0, -2.0);
  try {
    solve_ansatz(off, k3d);
    FAIL("expected ConstraintUnsatisfied");
  } catch (const ConstraintUnsatisfied& e) {
    CHECK_THAT(e.residual(), WithinAbs(-97.0, 1e-3));
  }
  CHECK_THROWS_AS(ground_energy(off, k3d), ConstraintUnsatisfied);
  // The rounded reference B misses C = 2 by ~1.6e-5, far above 1e-9.
  CHECK_THROWS_AS(solve_ansatz(Potential::checked(4.0, 5.87, 2.0, -2.0), k3d),
                  ConstraintUnsatisfied);
}

TEST_CASE("ansatz: constraint on C", "[ansatz]") {
  CHECK_THAT(constraint_c(4.0, 5.87, -2.0, k3d), WithinAbs(2.0, 2e-4));
  CHECK_THAT(constraint_c(4.0, 5.65, -2.0, k2d), WithinAbs(2.0, 5e-4));
  CHECK_THAT(constraint_c(1.0, 0.0, -1e-12, k3d), WithinAbs(0.0, 1e-11));
  CHECK_THROWS_AS(constraint_c(4.0, -4.0, -2.0, k3d), DomainError);
  CHECK_THROWS_AS(constraint_c(0.0, 1.0, -2.0, k3d), DomainError);
}

TEST_CASE("ansatz: solving the constraint for B", "[ansatz]") {
  const BRoots r3 = solve_b(4.0, 2.0, -2.0, k3d);
  CHECK(std::any_of(r3.roots.begin(), r3.roots.end(),
                    [](double B) { return std::abs(B - 5.870) <= 0.005; }));
  const BRoots r2 = solve_b(4.0, 2.0, -2.0, k2d);
  CHECK(std::any_of(r2.roots.begin(), r2.roots.end(),
                    [](double B) { return std::abs(B - 5.651) <= 0.005; }));
  for (const BRoots* set : {&r3, &r2}) {
    CHECK(std::is_sorted(set->roots.begin(), set->roots.end()));
    for (double B : set->roots) {
      CHECK(std::abs(constraint_c(4.0, B, -2.0, set == &r3 ? k3d : k2d) - 2.0) <= 1e-12);
    }
  }
  CHECK_THAT(select_default_root(r3), WithinAbs(5.870015428, 1e-8));
}

TEST_CASE("ansatz: near-trivial constraint has a root near zero", "[ansatz]") {
  const double A = 1.0, C = 0.0, D = -1e-9;
  // Oracle: dense scan of f on [-0.5, 0.5] for a sign change.
  auto f = [&](double B) { return constraint_c(A, B, D, k3d) - C; };
  double scanned = NAN;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double x0 = -0.5 + static_cast<double>(i) / n;
    const double x1 = -0.5 + static_cast<double>(i + 1) / n;
    if ((f(x0) < 0.0) != (f(x1) < 0.0)) scanned = 0.5 * (x0 + x1);
  }
  REQUIRE(std::isfinite(scanned));

  const BRoots roots = solve_b(A, C, D, k3d);
  const auto near_zero = std::find_if(roots.roots.begin(), roots.roots.end(),
                                      [](double B) { return std::abs(B) < 1e-6; });
  REQUIRE(near_zero != roots.roots.end());
  CHECK(std::abs(*near_zero - scanned) <= 1e-6);
  CHECK_THAT(*near_zero, WithinRel(2e-9, 1e-3));
}

TEST_CASE("ansatz: non-monotone constraint yields all three roots", "[ansatz]") {
  // For |D| < 1/(27 sqrt A) the constraint has a local max and min inside
  // (-2 sqrt A, -sqrt A). Aim C between them.
  const double A = 1.0, D = -0.01;
  auto f = [&](double B) { return constraint_c(A, B, D, k3d); };
  // Locate the extrema by a fine scan (test-only oracle).
  double f_max = -INFINITY, f_min = INFINITY, b_at_max = 0.0;
  for (double B = -1.999; B < -1.0; B += 1e-6) {
    if (f(B) > f_max) {
      f_max = f(B);
      b_at_max = B;
    }
  }
  for (double B = b_at_max; B < -1.0; B += 1e-6) f_min = std::min(f_min, f(B));
  REQUIRE(f_max > f_min);
  const double C = 0.5 * (f_max + f_min);

  const BRoots roots = solve_b(A, C, D, k3d);
  REQUIRE(roots.roots.size() == 3);
  CHECK(roots.multiple);
  CHECK(std::is_sorted(roots.roots.begin(), roots.roots.end()));
  for (double B : roots.roots) CHECK(std::abs(f(B) - C) <= 1e-12);
  // None positive: the default falls back to the largest.
  CHECK(select_default_root(roots) == roots.roots.back());
}

TEST_CASE("ansatz: solve_b errors", "[ansatz]") {
  BracketOptions narrow;
  narrow.upper = 1.0;
  CHECK_THROWS_AS(solve_b(4.0, 2.0, -2.0, k3d, narrow), NoRootFound);
  CHECK_THROWS_AS(solve_b(0.0, 2.0, -2.0, k3d), DomainError);
  CHECK_THROWS_AS(solve_b(4.0, 2.0, 1.0, k3d), DomainError);
}

TEST_CASE("ansatz: ground energy", "[ansatz]") {
  CHECK_THAT(ground_energy(reference_3d(), k3d), WithinAbs(-0.164, 1e-3));
  CHECK_THAT(ground_energy(reference_3d(), k3d), WithinAbs(-0.1642, 1e-4));
  CHECK_THAT(ground_energy(reference_2d(), k2d), WithinAbs(-0.172, 1e-3));
  CHECK_THAT(ground_energy(reference_2d(), k2d), WithinAbs(-0.1718, 1e-4));

  // E ~ D^2 as D -> 0-.
  for (double D : {-1e-2, -1e-4, -1e-6}) {
    const auto p = Potential::checked(4.0, 1.0, constraint_c(4.0, 1.0, D, k3d), D);
    const double E = ground_energy(p, k3d);
    CHECK(E < 0.0);
    CHECK_THAT(E, WithinRel(-4.0 * D * D / 25.0, 1e-12));
  }
}

TEST_CASE("ansatz: log derivatives against finite differences", "[ansatz]") {
  const AnsatzParams q{-2.0, -0.405268, 2.46750};
  const LogDerivatives d = log_ansatz_derivatives(q, 1.0);
  CHECK_THAT(d.g, WithinAbs(-2.405268, 1e-12));
  CHECK_THAT(d.dg, WithinAbs(4.062232, 1e-12));
  CHECK_THAT(d.d2g, WithinAbs(-6.467500, 1e-12));

  const double h = 1e-6;
  auto g = [&](double r) { return log_ansatz_derivatives(q, r).g; };
  for (double r : {0.3, 1.0, 2.7, 9.0}) {
    const LogDerivatives dr = log_ansatz_derivatives(q, r);
    CHECK_THAT((g(r + h) - g(r - h)) / (2 * h), WithinAbs(dr.dg, 1e-6));
    // Second difference needs a larger step to stay clear of rounding; its
    // truncation error is h^2 g^(4) / 12.
    const double h2 = 1e-4;
    CHECK_THAT((g(r + h2) - 2 * g(r) + g(r - h2)) / (h2 * h2), WithinRel(dr.d2g, 1e-6));
  }

  CHECK(log_ansatz_derivatives({-0.7, -1.3, 4.0}, 1.0).g == -0.7 + -1.3);
  CHECK_THAT(log_ansatz_derivatives({-1.0, -1.0, 0.0}, 1e8).dg, WithinAbs(-1.0, 1e-12));
  CHECK_THROWS_AS(log_ansatz_derivatives(q, 0.0), DomainError);
}

TEST_CASE("ansatz: wavefunction shape", "[ansatz]") {
  const auto p3 = rounded_reference_potential(5.87, k3d);
  const ClosedFormSolution sol = solve_closed_form(p3, k3d);
  CHECK_THAT(radial_wavefunction(sol, 1.0, false), WithinRel(std::exp(-2.405268), 1e-6));
  CHECK_THAT(radial_wavefunction(sol, 1.0, false), WithinAbs(0.09024, 1e-5));
  CHECK(radial_wavefunction(sol, 1e-3, false) == 0.0);  // exp(-2000) underflows
  CHECK(radial_wavefunction(sol, 0.02, false) < 1e-40);
  CHECK(radial_wavefunction(sol, 6.812, false) / radial_wavefunction(sol, 1.0, false) > 1.0);
  CHECK(radial_wavefunction(sol, 2000.0, false) < 1e-300);
  CHECK_THAT(radial_wavefunction(sol, 3.0, true),
             WithinRel(sol.normalization * radial_wavefunction(sol, 3.0, false), 1e-14));
  CHECK_THROWS_AS(radial_wavefunction(sol, 0.0, false), DomainError);
}

TEST_CASE("ansatz: peak radius", "[ansatz]") {
  auto envelope = [](const AnsatzParams& q) {
    return [q](double r) { return log_ansatz_derivatives(q, r).g; };
  };
  const AnsatzParams q3 = solve_ansatz(rounded_reference_potential(5.87, k3d), k3d);
  const AnsatzParams q2 = solve_ansatz(rounded_reference_potential(5.65, k2d), k2d);
  CHECK_THAT(peak_radius(q3), WithinAbs(6.812, 0.01));
  CHECK_THAT(peak_radius(q3), WithinAbs(golden_max(envelope(q3), 0.5, 50.0), 1e-6));
  CHECK_THAT(peak_radius(q2), WithinAbs(6.5561, 0.001));
  CHECK_THAT(peak_radius(q2), WithinAbs(golden_max(envelope(q2), 0.5, 50.0), 1e-6));
  CHECK_THAT(peak_radius({-1.0, -1.0, 0.0}), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(peak_radius({1.0, -1.0, 1.0}), DomainError);
}

TEST_CASE("ansatz: normalization", "[ansatz]") {
  for (const Channel& ch : {k3d, k2d}) {
    const ClosedFormSolution sol = solve_closed_form(reference_potential(ch), ch);
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.scale = peak_radius(sol.params);
    auto density = [&](double r) {
      const double R = radial_wavefunction(sol, r, true);
      return R * R;
    };
    const double norm = integrate_adaptive(density, 0.0, INFINITY, opts).value;
    CHECK_THAT(norm, WithinAbs(1.0, 1e-6));

    // Without the square root the constant is 1/I and the integral is 1/I.
    const double I = std::exp(log_norm_integral(sol.params));
    const double literal = 1.0 / I;
    auto literal_density = [&](double r) {
      const double R = literal * radial_wavefunction(sol, r, false);
      return R * R;
    };
    const double literal_norm = integrate_adaptive(literal_density, 0.0, INFINITY, opts).value;
    CHECK_THAT(literal_norm, WithinRel(1.0 / I, 1e-8));
    CHECK(std::abs(literal_norm - 1.0) > 0.1);
  }
  CHECK_THROWS_AS(normalization_constant({1.0, -1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(normalization_constant({-1.0, -1.0, -0.6}), DomainError);
}

TEST_CASE("ansatz: matching system diagnostics", "[ansatz]") {
  const auto p = rounded_reference_potential(5.87, k3d);
  const AnsatzParams q = solve_ansatz(p, k3d);
  CHECK(max_abs(check_matching_system(q, p, k3d)) < 1e-10);

  AnsatzParams shifted = q;
  shifted.b += 0.1;
  CHECK_THAT(check_matching_system(shifted, p, k3d)[1],
             WithinAbs(shifted.b * shifted.b - q.b * q.b, 1e-12));
  CHECK(std::abs(check_matching_system(shifted, p, k3d)[1]) > 0.07);

  const auto p_up = Potential::checked(p.A(), p.B(), p.C() + 1.0, p.D());
  CHECK_THAT(std::abs(check_matching_system(q, p_up, k3d)[4]), WithinAbs(1.0, 1e-12));
}

TEST_CASE("ansatz: constraint round trip through solve_b", "[ansatz][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> A_dist(0.5, 10.0);
  std::uniform_real_distribution<double> D_dist(-5.0, -0.1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double A = A_dist(rng), D = D_dist(rng);
    const double B = -2.0 * std::sqrt(A) + 0.1 + u(rng) * (50.0 + 2.0 * std::sqrt(A) - 0.1);
    const Channel ch(i % 2 ? 2 : 3, i % 3);
    const double C = constraint_c(A, B, D, ch);
    const BRoots roots = solve_b(A, C, D, ch);
    const double nearest = *std::min_element(
        roots.roots.begin(), roots.roots.end(),
        [&](double x, double y) { return std::abs(x - B) < std::abs(y - B); });
    INFO("A=" << A << " B=" << B << " D=" << D);
    CHECK(std::abs(nearest - B) <= 1e-9);
  }
}

TEST_CASE("ansatz: energy and ODE identities on random solutions", "[ansatz][property]") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 50; ++i) {
    const auto [p, ch] = random_case(rng);
    const AnsatzParams q = solve_ansatz(p, ch);
    const double E = ground_energy(p, ch);
    CHECK_THAT(E, WithinRel(-q.b * q.b, 1e-12));
    CHECK(q.a < 0.0);
    CHECK(q.b < 0.0);

    // g'' + g'^2 = V + gamma/r^2 - E on a log grid.
    const double gamma = centrifugal_coefficient(ch);
    double worst = 0.0, v_scale = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double r = std::pow(10.0, -2.0 + 4.0 * k / 400.0);
      const LogDerivatives d = log_ansatz_derivatives(q, r);
      const double V = evaluate_potential(p, r);
      worst = std::max(worst, std::abs(d.d2g + d.dg * d.dg - (V + gamma / (r * r) - E)));
      v_scale = std::max(v_scale, std::abs(V));
    }
    CHECK(worst <= 1e-9 * v_scale);

    // Positive everywhere; g' changes sign exactly once, at the peak.
    const double r_peak = peak_radius(q);
    int sign_changes = 0;
    double prev = log_ansatz_derivatives(q, 1e-3).dg;
    for (int k = 1; k <= 2000; ++k) {
      const double r = std::pow(10.0, -3.0 + 7.0 * k / 2000.0);
      const double cur = log_ansatz_derivatives(q, r).dg;
      if ((cur < 0.0) != (prev < 0.0)) {
        ++sign_changes;
        CHECK(r >= r_peak);
      }
      prev = cur;
    }
    CHECK(sign_changes == 1);
    const ClosedFormSolution sol = solve_closed_form(p, ch);
    CHECK(radial_wavefunction(sol, r_peak, false) > 0.0);
  }
}
