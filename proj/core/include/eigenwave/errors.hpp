#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eigenwave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition on construction parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function (tan/asin singularities etc).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector length does not match the operator it is applied to.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a configured size cap (dense assembly, dense solves).
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Base for failures of numerical algorithms at run time.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A linear solve did not reach its tolerance.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// An eigenvalue iteration exhausted its budget.
class NonconvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Time-stepping growth beyond the stability monitor threshold.
class StabilityError : public NumericalError {
 public:
  StabilityError(const std::string& what, int step, double growth)
      : NumericalError(what), step_(step), growth_(growth) {}

  int step() const noexcept { return step_; }
  double growth() const noexcept { return growth_; }

 private:
  int step_;
  double growth_;
};

/// An internal consistency check failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace eigenwave
