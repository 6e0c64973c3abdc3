#pragma once

#include <stdexcept>
#include <string>

namespace plsm {

enum class ErrorCode {
  kInvalidArgument,
  kCorruption,
  kIoError,
  kClosed,
  kReadOnly,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kCorruption: return "corruption";
    case ErrorCode::kIoError: return "io error";
    case ErrorCode::kClosed: return "closed";
    case ErrorCode::kReadOnly: return "read-only";
  }
  return "unknown";
}

// Every failure surfaced by the library is an Error carrying a code, so
// callers can tell corruption apart from misuse without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_corruption(const std::string& msg) {
  throw Error(ErrorCode::kCorruption, msg);
}

[[noreturn]] inline void throw_invalid(const std::string& msg) {
  throw Error(ErrorCode::kInvalidArgument, msg);
}

}  // namespace plsm
