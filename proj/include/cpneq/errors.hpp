#pragma once

#include <stdexcept>
#include <string>

namespace cpneq {

enum class ErrorKind {
  InvalidParameter,
  DomainError,
  IntegrationError,
  SummationError,
  CrossValidationError,
  InvalidMaterial,
  ParseError,
  ConfigError,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Quadrature that ran out of evaluations. Carries the partial result.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double partial_value,
                   double error_estimate)
      : Error(ErrorKind::IntegrationError, what),
        partial_value_(partial_value),
        error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace cpneq
