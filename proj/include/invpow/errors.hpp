#pragma once

#include <stdexcept>
#include <string>

namespace invpow {

// Base of every error raised by the library. what() is always a single line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  // Short machine-readable tag, e.g. "DomainError".
  virtual const char* kind() const noexcept { return "Error"; }
};

class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

// The closed form only solves the radial equation when C matches the
// constraint value; residual = constraint_c(A, B, D, ch) - C.
class ConstraintUnsatisfied : public Error {
 public:
  explicit ConstraintUnsatisfied(double residual);
  double residual() const noexcept { return residual_; }
  const char* kind() const noexcept override { return "ConstraintUnsatisfied"; }

 private:
  double residual_;
};

class NoRootFound : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NoRootFound"; }
};

class NoInteriorPeak : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NoInteriorPeak"; }
};

class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  double best_estimate() const noexcept { return best_estimate_; }
  const char* kind() const noexcept override { return "ConvergenceFailure"; }

 private:
  double best_estimate_;
};

class NoEigenvalueInBracket : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NoEigenvalueInBracket"; }
};

class NotGroundState : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NotGroundState"; }
};

class BranchesUndefined : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "BranchesUndefined"; }
};

}  // namespace invpow
