#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace volburg {

enum class ErrorKind {
  InvalidInput,
  InsufficientData,
  DegenerateSignal,
  NumericalFailure,
  NoPeak,
  SchemaError,
  IoError,
};

inline constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateSignal: return "DegenerateSignal";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::NoPeak: return "NoPeak";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace volburg
