#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "heliocant/config.hpp"

namespace heliocant {

/// GRT vs convolution agreement for one map.
struct EngineAgreement {
  std::string label;
  CantingVariant variant = CantingVariant::spherical;
  Case scenario = Case::single;
  double rms_over_peak = 0.0;  // RMS(grt - conv) / peak(grt)
};

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<std::string> outputs;  // relative to output_dir, sorted
  std::map<Engine, ConcentrationReport> reports;
  std::vector<EngineAgreement> agreement;  // filled for engine = both
  std::string manifest;                    // manifest.json contents
};

/// Largest RMS/peak the manifest accepts as engine agreement.
inline constexpr double kEngineAgreementThreshold = 0.02;

/// Library version string.
std::string version();

/// Computes every artifact for `config` and writes it under
/// `config.output_dir`. Files are staged in a sibling directory and moved
/// into place only after everything succeeded; on failure the staging area
/// is removed and the error propagates. Progress and wall-clock timings go to
/// `log` when given (never into the artifacts, which are byte-deterministic).
RunSummary run(const SceneConfig& config, std::ostream* log = nullptr);

}  // namespace heliocant
