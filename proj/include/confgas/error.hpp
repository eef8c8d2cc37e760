#pragma once

#include <stdexcept>
#include <string>

namespace confgas {

/// Argument outside the mathematical domain of a function (a <= 0, x <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature or an iterative method did not reach its tolerance.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A continued fraction or series exhausted its iteration budget.
class ConvergenceError : public ToleranceError {
 public:
  using ToleranceError::ToleranceError;
};

/// Operation called outside its documented window (belt, degree range, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root bracketing failed.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or command-line input.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace confgas
