#pragma once

#include <stdexcept>
#include <string>

namespace spottransit {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDomain,
  kNoSolution,
  kConvergence,
  kIo,
  kParse,
  kInvariant,
};

const char* to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is what
/// crosses the C boundary; the message is kept for diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& m) : Error(ErrorCode::kInvalidArgument, m) {}
};

/// Evaluation outside the domain of a demand curve or model.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& m) : Error(ErrorCode::kDomain, m) {}
};

class NoSolution : public Error {
 public:
  explicit NoSolution(const std::string& m) : Error(ErrorCode::kNoSolution, m) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& m) : Error(ErrorCode::kConvergence, m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error(ErrorCode::kIo, m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error(ErrorCode::kParse, m) {}
};

/// A documented postcondition failed to hold.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& m) : Error(ErrorCode::kInvariant, m) {}
};

}  // namespace spottransit
