#include "heliocant/error.hpp"

namespace heliocant {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::SunBehindMirror: return "sun_behind_mirror";
    case ErrorCode::DegenerateBisector: return "degenerate_bisector";
    case ErrorCode::DegenerateFrame: return "degenerate_frame";
    case ErrorCode::SunBelowHorizon: return "sun_below_horizon";
    case ErrorCode::OutOfDomain: return "out_of_domain";
    case ErrorCode::ExtremeIncidence: return "extreme_incidence";
    case ErrorCode::BackLitFacet: return "back_lit_facet";
    case ErrorCode::KernelAliasing: return "kernel_aliasing";
    case ErrorCode::GridTooSmall: return "grid_too_small";
    case ErrorCode::GridMismatch: return "grid_mismatch";
    case ErrorCode::EmptyMap: return "empty_map";
    case ErrorCode::EmptySchedule: return "empty_schedule";
    case ErrorCode::ConfigParse: return "config_parse";
    case ErrorCode::ConfigValidation: return "config_validation";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace heliocant
