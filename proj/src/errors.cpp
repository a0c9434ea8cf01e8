#include "cpneq/errors.hpp"

namespace cpneq {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::IntegrationError: return "integration-error";
    case ErrorKind::SummationError: return "summation-error";
    case ErrorKind::CrossValidationError: return "cross-validation-error";
    case ErrorKind::InvalidMaterial: return "invalid-material";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ConfigError: return "config-error";
  }
  return "error";
}

}  // namespace cpneq
