#pragma once

#include <stdexcept>
#include <string>

namespace focalis {

/// Input data violates a documented invariant (unsorted spectrum, non-normal
/// vector, infeasible configuration, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical configuration is unusable (bad exponent grid, step counts).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An oracle was asked for a value where it is undefined (e.g. at a focal radius).
class OracleUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operator has a (near) null direction and cannot be inverted.
class SingularOperator : public std::domain_error {
 public:
  SingularOperator(const std::string& what, int index) : std::domain_error(what), index_(index) {}
  int eigen_index() const { return index_; }

 private:
  int index_;
};

}  // namespace focalis
