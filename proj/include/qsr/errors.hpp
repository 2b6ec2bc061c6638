#pragma once

#include <stdexcept>
#include <string>

namespace qsr {

/// Invalid configuration or out-of-domain parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector lengths disagree with the operator they are fed to.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The quantizer input left the range its guarantees were derived for.
class InputRangeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two neighborhood sets could claim the same recovered spike.
class AmbiguityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity that is bounded away from zero in theory came out too small.
class NumericalAnomalyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The convex solver hit its iteration cap. Carries the final residuals.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations,
                   double primal_residual, double dual_residual)
      : std::runtime_error(what),
        iterations_(iterations),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual) {}

  int iterations() const noexcept { return iterations_; }
  double primal_residual() const noexcept { return primal_residual_; }
  double dual_residual() const noexcept { return dual_residual_; }

 private:
  int iterations_;
  double primal_residual_;
  double dual_residual_;
};

}  // namespace qsr
