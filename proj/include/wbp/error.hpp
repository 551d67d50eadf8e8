#pragma once

#include <stdexcept>
#include <string>

namespace wbp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested feature or quadrature kind is not available for these inputs.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A radial function evaluated to a non-positive or non-finite value.
class InvalidBodyError : public Error {
 public:
  using Error::Error;
};

/// Constructor parameters that fail the positivity or symmetry probes.
class InvalidParametersError : public Error {
 public:
  using Error::Error;
};

/// A radial or polar integral did not produce a finite value.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing ran past the radius cap.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Weight vanished where it is used as a denominator.
class DivisionError : public Error {
 public:
  using Error::Error;
};

/// Input to an even-only transform carried a significant odd part.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// Inversion would amplify a coefficient beyond the configured cap.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// No region of the Grassmannian where the representing function is negative.
class NoNegativeRegionError : public Error {
 public:
  using Error::Error;
};

/// The counterexample construction could not establish one of its inequalities.
class ConstructionFailedError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed or validated.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = -1, int column = -1)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    if (line < 0) return message;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace wbp
