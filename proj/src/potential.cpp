#include "invpow/potential.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace invpow {

namespace {
std::string residual_message(double residual) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "constraint on C unsatisfied: residual=%.6g", residual);
  return buf;
}
}  // namespace

ConstraintUnsatisfied::ConstraintUnsatisfied(double residual)
    : Error(residual_message(residual)), residual_(residual) {}

Potential Potential::checked(double A, double B, double C, double D) {
  if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C) ||
      !std::isfinite(D)) {
    throw DomainError("potential coefficients must be finite");
  }
  if (!(A > 0.0)) throw DomainError("potential requires A > 0");
  if (!(D < 0.0)) throw DomainError("potential requires D < 0");
  if (!(B > -2.0 * std::sqrt(A))) {
    throw DomainError("potential requires B > -2 sqrt(A)");
  }
  return Potential(A, B, C, D);
}

Channel::Channel(int dimension, int angular)
    : dimension_(dimension), angular_(angular) {
  if (dimension != 2 && dimension != 3) {
    throw DomainError("dimension must be 2 or 3");
  }
  if (angular < 0) throw DomainError("angular quantum number must be >= 0");
}

RadialGrid::RadialGrid(double r_min, double r_max, double step)
    : r_min_(r_min), r_max_(r_max), step_(step), size_(0) {
  if (!(r_min > 0.0) || !std::isfinite(r_max) || !(r_max > r_min) ||
      !(step > 0.0)) {
    throw DomainError("grid requires 0 < r_min < r_max and step > 0");
  }
  const double panels = (r_max - r_min) / step;
  if (panels < 16.0) throw DomainError("grid must span at least 16 steps");
  // Tolerate rounding so that e.g. (40 - 0.05) / 1e-3 lands on r_max.
  size_ = static_cast<std::size_t>(std::floor(panels + 1e-9)) + 1;
}

double evaluate_potential(const Potential& p, double r) {
  if (!(r > 0.0)) throw DomainError("potential evaluated at r <= 0");
  const double inv = 1.0 / r;
  const double inv2 = inv * inv;
  return p.A() * inv2 * inv2 + p.B() * inv2 * inv + p.C() * inv2 + p.D() * inv;
}

double centrifugal_coefficient(const Channel& ch) {
  const double k = ch.angular();
  switch (ch.dimension()) {
    case 3:
      return k * (k + 1.0);
    case 2:
      return k * k - 0.25;
    default:
      throw DomainError("dimension must be 2 or 3");
  }
}

double effective_radial_term(const Potential& p, const Channel& ch, double E,
                             double r) {
  return E - evaluate_potential(p, r) - centrifugal_coefficient(ch) / (r * r);
}

}  // namespace invpow
