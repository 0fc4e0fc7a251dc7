#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gsplit {

enum class ErrorCode {
  NotSymmetric,
  NoConvergence,
  Singular,
  DimensionMismatch,
  BadOrientation,
  BadNode,
  Disconnected,
  DuplicateEdge,
  NotSubgraph,
  BadSize,
  BadFactor,
  ZeroNormal,
  SelfCheckFailed,
  DomainError,
  NotOrthogonal,
  NotNormal,
  NotIsoAveraged,
  ExcludedInput,
  UnknownExample,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (tests, the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gsplit
