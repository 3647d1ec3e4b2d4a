#pragma once

#include <cstddef>

#include "invpow/errors.hpp"

// Natural units throughout: hbar = 1, 2 mu = 1, so the radial equation reads
//   R''(r) + [E - V(r) - gamma / r^2] R(r) = 0.
namespace invpow {

// V(r) = A r^-4 + B r^-3 + C r^-2 + D r^-1.
class Potential {
 public:
  // Enforces A > 0, D < 0 and B > -2 sqrt(A); throws DomainError otherwise.
  static Potential checked(double A, double B, double C, double D);
  // No invariant checks. Only for diagnostics that probe degenerate
  // potentials (e.g. D = 0).
  static Potential unchecked(double A, double B, double C, double D) noexcept {
    return Potential(A, B, C, D);
  }

  double A() const noexcept { return A_; }
  double B() const noexcept { return B_; }
  double C() const noexcept { return C_; }
  double D() const noexcept { return D_; }

  Potential with_B(double B) const { return checked(A_, B, C_, D_); }
  Potential with_C(double C) const { return checked(A_, B_, C, D_); }

 private:
  Potential(double A, double B, double C, double D) noexcept
      : A_(A), B_(B), C_(C), D_(D) {}

  double A_, B_, C_, D_;
};

// Spatial dimension plus angular quantum number (l in 3D, m in 2D).
class Channel {
 public:
  Channel(int dimension, int angular);

  static Channel three_d(int ell) { return Channel(3, ell); }
  static Channel two_d(int m) { return Channel(2, m); }

  int dimension() const noexcept { return dimension_; }
  int angular() const noexcept { return angular_; }

 private:
  int dimension_;
  int angular_;
};

// Uniform grid r_min, r_min + step, ..., up to r_max.
class RadialGrid {
 public:
  RadialGrid(double r_min, double r_max, double step);

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  double step() const noexcept { return step_; }

  // Number of grid points; the last point is <= r_max.
  std::size_t size() const noexcept { return size_; }
  double radius(std::size_t i) const noexcept {
    return r_min_ + static_cast<double>(i) * step_;
  }

 private:
  double r_min_, r_max_, step_;
  std::size_t size_;
};

double evaluate_potential(const Potential& p, double r);

// gamma = l(l+1) in 3D, m^2 - 1/4 in 2D.
double centrifugal_coefficient(const Channel& ch);

// E - V(r) - gamma / r^2, the coefficient of R in R'' + [.] R = 0.
double effective_radial_term(const Potential& p, const Channel& ch, double E,
                             double r);

}  // namespace invpow
