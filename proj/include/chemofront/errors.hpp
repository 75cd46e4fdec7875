#pragma once

#include <stdexcept>
#include <string>

namespace chemofront {

/// Base of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, or inconsistent declared bounds.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A standing hypothesis required by an operation does not hold.
class HypothesisViolation : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Iterations, brackets or quadrature budgets that fail to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A time step produced non-finite values, negativity, or a collapsing front.
class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A runtime bound that the model guarantees was observed to fail.
class AssertionFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace chemofront
