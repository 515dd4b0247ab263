#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fconc {

/// A value fell outside the interval a transform or field is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called with arguments that violate its contract.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration record failed validation. field() is the dotted path of
/// the offending entry, e.g. "pairs[1].c".
class ConfigError : public PreconditionError {
 public:
  ConfigError(std::string field, const std::string& message)
      : PreconditionError(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Numerical machinery failed: quadrature did not converge, a solver broke
/// down, an iteration hit its cap.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace fconc
