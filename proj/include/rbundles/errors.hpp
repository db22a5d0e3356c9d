#pragma once

#include <stdexcept>
#include <string>

namespace rbundles {

// Mathematical failure modes surfaced by the library. The CLI maps
// DomainError to exit code 2 and InputError to exit code 1.
enum class ErrorCode {
  DivisionByZero,
  ModulusMismatch,
  DependentForms,
  NotInX,
  NotInX8,
  NotSpecialForm,
  TangentDirection,
  DegenerateConic,
  OutOfRange,
  FitFailure,
  SampleInX8,
  Precondition,
  Internal,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::DependentForms: return "DependentForms";
    case ErrorCode::NotInX: return "NotInX";
    case ErrorCode::NotInX8: return "NotInX8";
    case ErrorCode::NotSpecialForm: return "NotSpecialForm";
    case ErrorCode::TangentDirection: return "TangentDirection";
    case ErrorCode::DegenerateConic: return "DegenerateConic";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::FitFailure: return "FitFailure";
    case ErrorCode::SampleInX8: return "SampleInX8";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Malformed user-supplied input. `field` names the offending JSON field.
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error("field '" + field + "': " + what),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace rbundles
