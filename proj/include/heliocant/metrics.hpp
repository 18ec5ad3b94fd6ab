#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "heliocant/flux.hpp"

namespace heliocant {

/// Everything a day-course run needs besides the schedule.
struct Scene {
  ReceiverSpec receiver;
  SunshapeModel sunshape;
  std::vector<HeliostatSpec> heliostats{HeliostatSpec{}};
  SunPosition reference_sun{0.0, 44.63, std::nullopt};
  SamplingSpec sampling;
  double dni = 1.0;
};

enum class Case { single, symmetric_pair };

std::string to_string(Case c);

struct ScheduleEntry {
  std::string label;
  SunPosition sun;
};

/// Peak flux over DNI; maps are stored in suns so this is the peak cell.
double concentration_ratio(const FluxMap& m);

/// Fraction of the on-grid power whose cell centres fall inside the disc of
/// `diameter` centred on the grid.
double intercepted_power(const FluxMap& m, double diameter);

/// Canting computed once from the scene's reference sun at the heliostat's
/// own position.
CantingSet compute_canting(const Scene& scene, const HeliostatSpec& h, CantingVariant variant);

struct ReportRow {
  std::string label;
  SunPosition sun;
  CantingVariant variant = CantingVariant::spherical;
  Case scenario = Case::single;
  double concentration = 0.0;         // peak of the (summed) map [suns]
  double sum_of_peaks = 0.0;          // sum of per-heliostat-group peaks [suns]
  double intercepted_fraction = 0.0;  // inside the receiver diameter
  double intercepted_power = 0.0;     // W per unit DNI
  double total_power = 0.0;           // on-grid, W per unit DNI
  double spilled_power = 0.0;
  double max_incidence_deg = 0.0;     // largest heliostat incidence in the case
};

struct ConcentrationReport {
  Engine engine = Engine::conv;
  std::vector<std::string> labels;
  std::vector<ReportRow> rows;
  /// Frozen canting per heliostat name and variant.
  std::map<std::string, std::map<CantingVariant, CantingSet>> canting;

  const ReportRow& row(const std::string& label, CantingVariant v, Case c) const;
  /// C_off_axis / C_spherical - 1; NaN when either variant is missing.
  double gain(const std::string& label, Case c) const;
};

/// One computed map, handed to the observer of day_course.
struct MapRecord {
  std::string label;
  CantingVariant variant;
  Case scenario;
  const FluxMap& map;
};

struct DayCourseOptions {
  std::vector<CantingVariant> variants{CantingVariant::spherical, CantingVariant::off_axis};
  std::vector<Case> cases{Case::single, Case::symmetric_pair};
  Engine engine = Engine::conv;
  std::function<void(const MapRecord&)> on_map;
};

/// Concentration across a schedule. Canting is fixed from the reference sun;
/// heliostats re-aim at every entry. The symmetric pair adds each
/// heliostat's mirror image across the X' axis. Throws EmptySchedule.
ConcentrationReport day_course(const Scene& scene, const std::vector<ScheduleEntry>& schedule,
                               const DayCourseOptions& options = {});

/// Concentration CSV: rows variant x case, columns schedule labels, plus
/// gain and interception rows.
void write_report_csv(std::ostream& os, const ConcentrationReport& report);

}  // namespace heliocant
