#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace acas {

enum class ErrorCode {
  Unavailable,
  UnknownFunction,
  MalformedRepresentation,
  DuplicateId,
  UnknownAggregate,
  PathConflict,
  WrongMode,
  UnknownPath,
  ProviderUnreachable,
  UnknownService,
  SyntaxError,
  TypeMismatch,
  DuplicateAdaptation,
  UnknownAdaptation,
  UnknownOperation,
  AdaptationFailure,
  CycleDetected,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorCode code);

/// Base error for every failure the middleware can signal. `subject()` names
/// the offending path, provider, operation or element, depending on the code.
class AcasError : public std::runtime_error {
 public:
  AcasError(ErrorCode code, std::string message, std::string subject = {})
      : std::runtime_error(std::move(message)), code_(code), subject_(std::move(subject)) {}

  ErrorCode code() const { return code_; }
  const std::string& subject() const { return subject_; }

 private:
  ErrorCode code_;
  std::string subject_;
};

class SyntaxError : public AcasError {
 public:
  SyntaxError(std::string message, std::size_t offset)
      : AcasError(ErrorCode::SyntaxError, message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnavailableError : public AcasError {
 public:
  explicit UnavailableError(const std::string& path)
      : AcasError(ErrorCode::Unavailable, "context parameter unavailable: " + path, path) {}

  const std::string& path() const { return subject(); }
};

class AdaptationFailure : public AcasError {
 public:
  AdaptationFailure(std::string adaptationName, std::string cause)
      : AcasError(ErrorCode::AdaptationFailure,
                  "adaptation '" + adaptationName + "' failed: " + cause, adaptationName),
        cause_(std::move(cause)) {}

  const std::string& adaptation() const { return subject(); }
  const std::string& cause() const { return cause_; }

 private:
  std::string cause_;
};

/// A validation finding: which element it concerns, which rule it broke.
struct Diagnostic {
  std::string subject;
  std::string rule;
  std::string message;
};

class ValidationError : public AcasError {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace acas
