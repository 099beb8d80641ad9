#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iondfs {

/// Failure categories raised by the library. The CLI maps each category to
/// an exit code (see `exit_code_for`).
enum class ErrorCode {
  InvalidArgument,
  IndexOutOfRange,
  NonPositiveMode,
  QuadratureNotConverged,
  AdiabaticityViolated,
  IncommensurateModes,
  DimensionMismatch,
  DimensionGuard,
  CutoffGuard,
  ResolutionGuard,
  NotConverged,
  ZeroTrace,
  NotNormalized,
  LeakageAboveThreshold,
  ModelMismatch,
  RefocusPremiseViolated,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace iondfs
