#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heliocant {

enum class ErrorCode {
  InvalidArgument,
  SunBehindMirror,
  DegenerateBisector,
  DegenerateFrame,
  SunBelowHorizon,
  OutOfDomain,
  ExtremeIncidence,
  BackLitFacet,
  KernelAliasing,
  GridTooSmall,
  GridMismatch,
  EmptyMap,
  EmptySchedule,
  ConfigParse,
  ConfigValidation,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library reports carries a stable code so the CLI can
/// print a machine-parseable line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heliocant
