#pragma once

#include <stdexcept>
#include <string>

namespace huygens {

/// Input outside the domain of a model or function (e.g. t <= 0 in the
/// matter-dominated universe, z <= 0 for Ci).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A timing problem with no solution, e.g. Bob can never be strictly inside
/// Alice's future light cone because of the de Sitter event horizon.
class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical non-convergence. Carries the best estimate reached so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace huygens
