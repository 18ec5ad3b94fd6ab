#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "heliocant/metrics.hpp"

namespace heliocant {

enum class EngineSelection { grt, conv, both };

std::string to_string(EngineSelection e);
EngineSelection parse_engine_selection(const std::string& text);

/// Validated scene description read from a `.scene` file.
///
/// Grammar (one item per line, `#` starts a comment):
///
///     [section]            site | receiver | sunshape | heliostat | reference | schedule | run
///     key = value          keys are fixed per section; unknown keys are errors
///
/// `[heliostat]` may repeat (one block per heliostat). In `[schedule]`, the
/// keys `sun` (label, azimuth, elevation in degrees), `utc` (ISO datetime,
/// resolved through the ephemeris) and `solar_hours` (comma list on the
/// idealized equinox path at the site latitude) may repeat and are kept in
/// file order. All angles are in degrees.
struct SceneConfig {
  std::string source;
  SiteSpec site;
  Scene scene;
  std::string reference_mode = "equinox-noon";
  std::vector<ScheduleEntry> schedule;
  std::vector<std::string> schedule_sources;  // "sun" | "utc" | "solar_hours"
  EngineSelection engine = EngineSelection::conv;
  std::filesystem::path output_dir = "heliocant-out";
  std::vector<CantingVariant> variants{CantingVariant::spherical, CantingVariant::off_axis};
  std::vector<Case> cases{Case::single, Case::symmetric_pair};

  /// Cross-field checks; throws ConfigValidation naming the offending field.
  void validate() const;

  /// Every effective parameter, once, in a stable order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses `text`; `source` names the input in error messages.
SceneConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Reads and parses a file; throws Io when it cannot be read.
SceneConfig load_config(const std::filesystem::path& path);

/// Keys accepted in `section` (schedule keys are the repeatable ones).
const std::vector<std::string>& section_keys(const std::string& section);

}  // namespace heliocant
