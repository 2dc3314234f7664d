#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tunnelling {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a precondition or a type invariant. The CLI maps
/// these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Failures that arise while computing on valid inputs. The CLI maps these
/// to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

/// E >= U where an evanescent (under-barrier) solution was required.
class NotEvanescent : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedBarrier : public InputError {
 public:
  using InputError::InputError;
};

/// Stop-time requested with omega0 == 0.
class NoPerturbation : public InputError {
 public:
  using InputError::InputError;
};

class InvalidDispersion : public InputError {
 public:
  using InputError::InputError;
};

class InvalidMeasurement : public InputError {
 public:
  using InputError::InputError;
};

class GridTooSmall : public InputError {
 public:
  using InputError::InputError;
};

class SingularOverlap : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PrematureMeasurement : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NumericalBlowup : public NumericalError {
 public:
  NumericalBlowup(const std::string& what, std::size_t step)
      : NumericalError(what), step_(step) {}
  [[nodiscard]] std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace tunnelling
