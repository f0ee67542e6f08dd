#pragma once

#include <stdexcept>
#include <string>

namespace gamelab {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands (non-square input, wrong vector length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (degree-0 polynomial, non-finite input, bad enum, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure at runtime (iteration did not converge, non-finite state).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Input violates the hypothesis a formula needs (e.g. an eigenvalue with
/// non-positive real part where positivity is required).
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// The requested game has no stationary point.
class NoEquilibriumError : public Error {
 public:
  using Error::Error;
};

}  // namespace gamelab
