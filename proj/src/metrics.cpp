#include "heliocant/metrics.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <ostream>
#include <utility>

#include "heliocant/error.hpp"
#include "heliocant/io.hpp"

namespace heliocant {

std::string to_string(Case c) { return c == Case::single ? "single" : "symmetric_pair"; }

double concentration_ratio(const FluxMap& m) { return map_stats(m).peak; }

double intercepted_power(const FluxMap& m, double diameter) {
  const GridSpec& g = m.grid;
  const double r2 = 0.25 * diameter * diameter;
  double inside = 0.0;
  double all = 0.0;
  for (int iz = 0; iz < g.cells_z; ++iz) {
    const double z = g.z_centre(iz);
    for (int iy = 0; iy < g.cells_y; ++iy) {
      const double y = g.y_centre(iy);
      const double v = m.at(iy, iz);
      all += v;
      if (y * y + z * z <= r2) inside += v;
    }
  }
  return all > 0.0 ? inside / all : 0.0;
}

CantingSet compute_canting(const Scene& scene, const HeliostatSpec& h, CantingVariant variant) {
  h.validate();
  const ModuleLayout layout = module_centres(h);
  const double d = slant_distance(h, scene.receiver.centre);
  if (variant == CantingVariant::spherical) return spherical_canting(h, layout, d);
  const OffAxisContext ctx =
      make_off_axis_context(sun_vector(scene.reference_sun), target_direction(h, scene.receiver.centre));
  return off_axis_canting(h, layout, ctx, d);
}

const ReportRow& ConcentrationReport::row(const std::string& label, CantingVariant v, Case c) const {
  for (const ReportRow& r : rows) {
    if (r.label == label && r.variant == v && r.scenario == c) return r;
  }
  throw Error(ErrorCode::InvalidArgument, "no report row for '" + label + "'");
}

double ConcentrationReport::gain(const std::string& label, Case c) const {
  try {
    const double sph = row(label, CantingVariant::spherical, c).concentration;
    const double off = row(label, CantingVariant::off_axis, c).concentration;
    return off / sph - 1.0;
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

namespace {

double incidence_deg(const HeliostatSpec& h, const UnitVector3& sun, const ReceiverSpec& r) {
  return bisector_normal(sun, target_direction(h, r.centre)).incidence * 180.0 / std::numbers::pi;
}

FluxMap group_flux(const Scene& scene, Engine engine, const std::vector<HeliostatSpec>& group,
                   const std::map<std::string, std::map<CantingVariant, CantingSet>>& canting,
                   CantingVariant variant, const ScheduleEntry& entry) {
  const UnitVector3 s = sun_vector(entry.sun);
  std::vector<RealizedHeliostat> realized;
  for (const HeliostatSpec& h : group) {
    realized.push_back(aim_heliostat(h, canting.at(h.name).at(variant), s, scene.receiver));
  }
  // Per-heliostat maps summed: the engines are linear in heliostats.
  FluxMap sum = FluxMap::zeros(scene.receiver.grid, scene.dni);
  sum.engine = to_string(engine);
  sum.sun = entry.sun;
  for (const RealizedHeliostat& h : realized) {
    const FluxMap m = compute_flux(engine, std::span(&h, 1), entry.sun, scene.sunshape, scene.receiver,
                                   scene.sampling, scene.dni);
    sum = map_add(sum, m);
  }
  sum.engine = to_string(engine);
  return sum;
}

}  // namespace

ConcentrationReport day_course(const Scene& scene, const std::vector<ScheduleEntry>& schedule,
                               const DayCourseOptions& options) {
  if (schedule.empty()) throw Error(ErrorCode::EmptySchedule, "sun schedule is empty");
  if (scene.heliostats.empty()) throw Error(ErrorCode::InvalidArgument, "scene has no heliostats");
  for (const ScheduleEntry& e : schedule) {
    if (!(e.sun.elevation_deg > 0.0)) {
      throw Error(ErrorCode::SunBelowHorizon, "schedule entry '" + e.label + "' has the sun below the horizon");
    }
  }

  const bool want_pair =
      std::find(options.cases.begin(), options.cases.end(), Case::symmetric_pair) != options.cases.end();
  std::vector<HeliostatSpec> mirrors;
  if (want_pair) {
    for (const HeliostatSpec& h : scene.heliostats) mirrors.push_back(h.mirrored_across_x_axis());
  }

  ConcentrationReport report;
  report.engine = options.engine;
  for (const std::vector<HeliostatSpec>* group : {&scene.heliostats, &std::as_const(mirrors)}) {
    for (const HeliostatSpec& h : *group) {
      for (CantingVariant v : options.variants) report.canting[h.name][v] = compute_canting(scene, h, v);
    }
  }

  for (const ScheduleEntry& entry : schedule) {
    report.labels.push_back(entry.label);
    const UnitVector3 s = sun_vector(entry.sun);
    for (CantingVariant v : options.variants) {
      const FluxMap primary = group_flux(scene, options.engine, scene.heliostats, report.canting, v, entry);
      std::optional<FluxMap> mirrored;
      if (want_pair) mirrored = group_flux(scene, options.engine, mirrors, report.canting, v, entry);

      for (Case c : options.cases) {
        const FluxMap map = c == Case::single ? primary : map_add(primary, *mirrored);
        ReportRow r;
        r.label = entry.label;
        r.sun = entry.sun;
        r.variant = v;
        r.scenario = c;
        const MapStats st = map_stats(map);
        r.concentration = st.peak;
        r.sum_of_peaks = c == Case::single ? st.peak : map_stats(primary).peak + map_stats(*mirrored).peak;
        r.total_power = st.total;
        r.spilled_power = map.spilled;
        r.intercepted_fraction = intercepted_power(map, scene.receiver.diameter);
        r.intercepted_power = r.intercepted_fraction * st.total;
        for (const HeliostatSpec& h : scene.heliostats) {
          r.max_incidence_deg = std::max(r.max_incidence_deg, incidence_deg(h, s, scene.receiver));
        }
        if (c == Case::symmetric_pair) {
          for (const HeliostatSpec& h : mirrors) {
            r.max_incidence_deg = std::max(r.max_incidence_deg, incidence_deg(h, s, scene.receiver));
          }
        }
        if (options.on_map) options.on_map({entry.label, v, c, map});
        report.rows.push_back(r);
      }
    }
  }
  return report;
}

void write_report_csv(std::ostream& os, const ConcentrationReport& report) {
  os << "# heliocant concentration report\n"
     << "# engine," << to_string(report.engine) << "\n"
     << "# unit,suns (peak flux density / DNI); x1 = single heliostat, x2 = symmetric pair\n"
     << "row";
  for (const std::string& l : report.labels) os << ',' << l;
  os << '\n';

  auto has = [&](CantingVariant v, Case c) {
    return std::any_of(report.rows.begin(), report.rows.end(),
                       [&](const ReportRow& r) { return r.variant == v && r.scenario == c; });
  };
  auto suffix = [](Case c) { return c == Case::single ? "_x1" : "_x2"; };
  auto emit = [&](const std::string& name, auto value) {
    os << name;
    for (const std::string& l : report.labels) os << ',' << format_fixed(value(l), 4);
    os << '\n';
  };

  for (CantingVariant v : {CantingVariant::spherical, CantingVariant::off_axis}) {
    for (Case c : {Case::single, Case::symmetric_pair}) {
      if (!has(v, c)) continue;
      emit(to_string(v) + suffix(c), [&](const std::string& l) { return report.row(l, v, c).concentration; });
    }
  }
  for (Case c : {Case::single, Case::symmetric_pair}) {
    if (!has(CantingVariant::spherical, c) || !has(CantingVariant::off_axis, c)) continue;
    emit(std::string("gain") + suffix(c), [&](const std::string& l) { return report.gain(l, c); });
  }
  for (CantingVariant v : {CantingVariant::spherical, CantingVariant::off_axis}) {
    if (!has(v, Case::symmetric_pair)) continue;
    emit(to_string(v) + "_x2_sum_of_peaks",
         [&](const std::string& l) { return report.row(l, v, Case::symmetric_pair).sum_of_peaks; });
  }
  for (CantingVariant v : {CantingVariant::spherical, CantingVariant::off_axis}) {
    for (Case c : {Case::single, Case::symmetric_pair}) {
      if (!has(v, c)) continue;
      emit("intercepted_" + to_string(v) + suffix(c),
           [&](const std::string& l) { return report.row(l, v, c).intercepted_fraction; });
    }
  }
}

}  // namespace heliocant
