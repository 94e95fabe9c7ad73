#pragma once

#include <stdexcept>
#include <string>

namespace qmachine {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the range where the model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller supplied an invalid count, shape or option.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on an outcome whose eigenstate set has zero measure.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its requested tolerance.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace qmachine
