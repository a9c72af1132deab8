#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace inradius {

/// A documented precondition or postcondition of an operation does not hold.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The direction v satisfies P(v) = 0, so no plane wave along v solves the eigenequation.
class CharacteristicDirectionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sampled |P_m| dropped below the ellipticity floor. `witness` is the offending unit vector.
class NonEllipticError : public std::domain_error {
 public:
  NonEllipticError(const std::string& what, Eigen::VectorXd witness)
      : std::domain_error(what), witness(std::move(witness)) {}
  Eigen::VectorXd witness;
};

class ZeroFieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The region A carries (numerically) no L2 mass, so the localized bound has no content.
class HypothesisViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(const std::string& what, double radius)
      : std::runtime_error(what), radius(radius) {}
  double radius;
};

/// A ball that was certified nonvanishing contains a sample below the certified floor.
class SoundnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace inradius
