#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Argument outside the mathematical domain of an operation (x <= 0, overlapping spheres, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Request exceeds a hard implementation limit (order cap, argument cap, unsupported multipole).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity left its range of validity, e.g. a round-trip operator with
/// spectral radius >= 1 or a quadrature that failed to converge.
class ValidityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace casimir
