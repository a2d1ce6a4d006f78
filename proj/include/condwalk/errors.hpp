#pragma once

#include <stdexcept>
#include <string>

namespace condwalk {

/// Argument outside the mathematical domain of an operation (e.g. a
/// conditioned walk started at the origin).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid run or estimator configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed its own self-check (recurrence instability,
/// quadrature non-convergence, rejection bound violated).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace condwalk
