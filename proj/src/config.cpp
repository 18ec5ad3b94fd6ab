#include "heliocant/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "heliocant/error.hpp"
#include "heliocant/io.hpp"

namespace heliocant {
namespace {

const std::map<std::string, std::vector<std::string>>& schema() {
  static const std::map<std::string, std::vector<std::string>> s{
      {"site", {"latitude", "longitude"}},
      {"receiver", {"centre", "diameter", "grid_cells", "grid_extent"}},
      {"sunshape", {"kind", "half_angle_mrad", "limb_coefficient"}},
      {"heliostat",
       {"name", "position", "width", "height", "modules_across", "modules_up", "module_width",
        "module_height", "focal_length", "reflectivity"}},
      {"reference", {"sun", "azimuth", "elevation"}},
      {"schedule", {"sun", "utc", "solar_hours"}},
      {"run", {"engine", "output", "samples", "radial_nodes", "azimuthal_nodes", "dni", "variants", "cases"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

/// Parser state: current location for error messages.
struct Cursor {
  std::string source;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ConfigParse, source + ":" + std::to_string(line) + ": " + msg);
  }

  double number(const std::string& key, const std::string& text) const {
    double v = 0.0;
    const std::string t = trim(text);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
      fail("'" + key + "' expects a number, got '" + text + "'");
    }
    return v;
  }

  int integer(const std::string& key, const std::string& text) const {
    const double v = number(key, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) fail("'" + key + "' expects an integer, got '" + text + "'");
    return static_cast<int>(v);
  }

  Vec3 vec3(const std::string& key, const std::string& text) const {
    const auto parts = split_list(text);
    if (parts.size() != 3) fail("'" + key + "' expects three comma-separated numbers");
    return {number(key, parts[0]), number(key, parts[1]), number(key, parts[2])};
  }
};

std::string hours_label(double hours) {
  const long minutes = std::lround(hours * 60.0);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02ldh%02ld", minutes / 60, minutes % 60);
  return buf;
}

std::string vec_string(const Vec3& v) {
  return format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z);
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ConfigValidation, msg); }

}  // namespace

std::string to_string(EngineSelection e) {
  switch (e) {
    case EngineSelection::grt: return "grt";
    case EngineSelection::conv: return "conv";
    case EngineSelection::both: return "both";
  }
  return "conv";
}

EngineSelection parse_engine_selection(const std::string& text) {
  if (text == "grt") return EngineSelection::grt;
  if (text == "conv") return EngineSelection::conv;
  if (text == "both") return EngineSelection::both;
  throw Error(ErrorCode::InvalidArgument, "engine must be grt, conv or both (got '" + text + "')");
}

const std::vector<std::string>& section_keys(const std::string& section) {
  const auto it = schema().find(section);
  if (it == schema().end()) throw Error(ErrorCode::InvalidArgument, "unknown section '" + section + "'");
  return it->second;
}

SceneConfig parse_config(const std::string& text, const std::string& source) {
  SceneConfig cfg;
  cfg.source = source;
  cfg.scene.heliostats.clear();

  Cursor cur{source, 0};
  std::string section;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;  // per non-repeatable section instance
  std::map<std::string, int> schedule_lines;
  bool reference_angles_given = false;
  bool saw_grid_cells = false;

  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++cur.line;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') cur.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) cur.fail("unknown section [" + section + "]");
      if (section != "heliostat" && seen_sections.count(section)) cur.fail("duplicate section [" + section + "]");
      seen_sections.insert(section);
      seen_keys.clear();
      if (section == "heliostat") {
        HeliostatSpec h;
        h.name = "H" + std::to_string(cfg.scene.heliostats.size() + 1);
        cfg.scene.heliostats.push_back(h);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) cur.fail("key '" + key + "' outside any section");
    const auto& keys = schema().at(section);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      cur.fail("unknown key '" + key + "' in [" + section + "] (allowed: " + join(keys) + ")");
    }
    if (value.empty()) cur.fail("key '" + key + "' has no value");
    if (section != "schedule") {
      if (seen_keys.count(key)) cur.fail("duplicate key '" + key + "' in [" + section + "]");
      seen_keys.insert(key);
    }

    if (section == "site") {
      (key == "latitude" ? cfg.site.latitude_deg : cfg.site.longitude_deg) = cur.number(key, value);
    } else if (section == "receiver") {
      ReceiverSpec& r = cfg.scene.receiver;
      if (key == "centre") r.centre = cur.vec3(key, value);
      if (key == "diameter") r.diameter = cur.number(key, value);
      if (key == "grid_cells") {
        r.grid.cells_y = r.grid.cells_z = cur.integer(key, value);
        saw_grid_cells = true;
      }
      if (key == "grid_extent") r.grid.extent_y = r.grid.extent_z = cur.number(key, value);
    } else if (section == "sunshape") {
      SunshapeModel& s = cfg.scene.sunshape;
      if (key == "kind") {
        try {
          s.kind = parse_sunshape_kind(value);
        } catch (const Error& e) {
          cur.fail(e.what());
        }
      }
      if (key == "half_angle_mrad") s.half_angle = cur.number(key, value) * 1e-3;
      if (key == "limb_coefficient") s.limb_coefficient = cur.number(key, value);
    } else if (section == "heliostat") {
      HeliostatSpec& h = cfg.scene.heliostats.back();
      if (key == "name") h.name = value;
      if (key == "position") h.position = cur.vec3(key, value);
      if (key == "width") h.width = cur.number(key, value);
      if (key == "height") h.height = cur.number(key, value);
      if (key == "modules_across") h.modules_across = cur.integer(key, value);
      if (key == "modules_up") h.modules_up = cur.integer(key, value);
      if (key == "module_width") h.module_width = cur.number(key, value);
      if (key == "module_height") h.module_height = cur.number(key, value);
      if (key == "focal_length") h.focal_length = cur.number(key, value);
      if (key == "reflectivity") h.reflectivity = cur.number(key, value);
    } else if (section == "reference") {
      if (key == "sun") {
        if (value != "equinox-noon" && value != "angles") cur.fail("reference sun must be 'equinox-noon' or 'angles'");
        cfg.reference_mode = value;
      }
      if (key == "azimuth") {
        cfg.scene.reference_sun.azimuth_deg = cur.number(key, value);
        reference_angles_given = true;
      }
      if (key == "elevation") {
        cfg.scene.reference_sun.elevation_deg = cur.number(key, value);
        reference_angles_given = true;
      }
    } else if (section == "schedule") {
      if (key == "sun") {
        const auto parts = split_list(value);
        if (parts.size() != 3 || parts[0].empty()) cur.fail("schedule 'sun' expects: label, azimuth, elevation");
        ScheduleEntry e{parts[0], {cur.number(key, parts[1]), cur.number(key, parts[2]), std::nullopt}};
        cfg.schedule.push_back(e);
        cfg.schedule_sources.push_back("sun");
      } else if (key == "utc") {
        UtcTime t;
        try {
          t = UtcTime::parse(value);
        } catch (const Error& e) {
          cur.fail(e.what());
        }
        cfg.schedule.push_back({t.iso(), {0.0, 0.0, t}});
        cfg.schedule_sources.push_back("utc");
      } else {
        for (const std::string& item : split_list(value)) {
          const double hours = cur.number(key, item);
          cfg.schedule.push_back({hours_label(hours), {0.0, 0.0, std::nullopt}});
          cfg.schedule_sources.push_back("solar_hours:" + format_double(hours));
        }
      }
      for (std::size_t k = schedule_lines.size(); k < cfg.schedule.size(); ++k) {
        schedule_lines["schedule[" + std::to_string(k) + "]"] = cur.line;
      }
    } else if (section == "run") {
      if (key == "engine") {
        try {
          cfg.engine = parse_engine_selection(value);
        } catch (const Error& e) {
          cur.fail(e.what());
        }
      }
      if (key == "output") cfg.output_dir = value;
      if (key == "samples") cfg.scene.sampling.surface = cur.integer(key, value);
      if (key == "radial_nodes") cfg.scene.sampling.radial = cur.integer(key, value);
      if (key == "azimuthal_nodes") cfg.scene.sampling.azimuthal = cur.integer(key, value);
      if (key == "dni") cfg.scene.dni = cur.number(key, value);
      if (key == "variants") {
        cfg.variants.clear();
        for (const std::string& v : split_list(value)) {
          if (v == "spherical") cfg.variants.push_back(CantingVariant::spherical);
          else if (v == "off_axis") cfg.variants.push_back(CantingVariant::off_axis);
          else cur.fail("unknown canting variant '" + v + "'");
        }
      }
      if (key == "cases") {
        cfg.cases.clear();
        for (const std::string& c : split_list(value)) {
          if (c == "single") cfg.cases.push_back(Case::single);
          else if (c == "symmetric_pair") cfg.cases.push_back(Case::symmetric_pair);
          else cur.fail("unknown case '" + c + "'");
        }
      }
    }
  }
  (void)saw_grid_cells;

  std::vector<std::string> missing;
  if (!seen_sections.count("heliostat")) missing.push_back("[heliostat]");
  if (!seen_sections.count("schedule") || cfg.schedule.empty()) missing.push_back("[schedule]");
  if (!missing.empty()) invalid(source + ": missing required sections: " + join(missing));

  if (cfg.reference_mode == "angles" && !reference_angles_given) {
    invalid(source + ": [reference] sun = angles needs azimuth and elevation");
  }
  if (cfg.reference_mode == "equinox-noon") {
    if (reference_angles_given) invalid(source + ": [reference] azimuth/elevation require sun = angles");
    cfg.scene.reference_sun = equinox_path(cfg.site.latitude_deg, 12.0);
  }

  // Resolve schedule entries that depend on the site.
  for (std::size_t k = 0; k < cfg.schedule.size(); ++k) {
    ScheduleEntry& e = cfg.schedule[k];
    const std::string& src = cfg.schedule_sources[k];
    if (src == "utc") {
      e.sun = ephemeris(cfg.site, *e.sun.timestamp);
    } else if (src.rfind("solar_hours:", 0) == 0) {
      const double hours = std::stod(src.substr(12));
      e.sun = equinox_path(cfg.site.latitude_deg, hours);
    }
    if (!(e.sun.elevation_deg > 0.0)) {
      std::ostringstream os;
      os << source << ":" << schedule_lines["schedule[" + std::to_string(k) + "]"] << ": schedule entry '"
         << e.label << "' has elevation " << e.sun.elevation_deg << " deg (sun must be above the horizon)";
      invalid(os.str());
    }
  }

  cfg.validate();
  return cfg;
}

void SceneConfig::validate() const {
  auto check = [&](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigValidation) throw;
      invalid(source + ": " + field + ": " + e.what());
    }
  };
  check("site", [&] { site.validate(); });
  check("receiver.grid", [&] { scene.receiver.grid.validate(); });
  if (!(scene.receiver.diameter > 0.0)) invalid(source + ": receiver.diameter must be positive");
  check("sunshape", [&] { scene.sunshape.validate(); });
  check("run.samples", [&] { scene.sampling.validate(); });
  if (!(scene.dni > 0.0)) invalid(source + ": run.dni must be positive");
  if (scene.heliostats.empty()) invalid(source + ": at least one [heliostat] is required");
  if (schedule.empty()) invalid(source + ": schedule is empty");
  if (variants.empty()) invalid(source + ": run.variants is empty");
  if (cases.empty()) invalid(source + ": run.cases is empty");

  std::set<std::string> names;
  for (std::size_t k = 0; k < scene.heliostats.size(); ++k) {
    const HeliostatSpec& h = scene.heliostats[k];
    const std::string field = "heliostat[" + std::to_string(k) + "]";
    check(field, [&] { h.validate(); });
    if (!(h.focal_length >= 80.0 && h.focal_length <= 120.0)) {
      invalid(source + ": " + field + ".focal_length must lie in [80, 120] m");
    }
    if (!names.insert(h.name).second || !names.insert(h.name + "_mirror").second) {
      invalid(source + ": " + field + ".name '" + h.name + "' is not unique");
    }
    if (!(h.position.x > scene.receiver.centre.x)) {
      invalid(source + ": " + field + ".position must lie on the receiver's front side (x' > receiver x')");
    }
  }
  if (!(scene.reference_sun.elevation_deg > 0.0)) invalid(source + ": reference sun is below the horizon");
  for (const ScheduleEntry& e : schedule) {
    if (!(e.sun.elevation_deg > 0.0)) {
      invalid(source + ": schedule entry '" + e.label + "' is below the horizon");
    }
  }
}

std::vector<std::pair<std::string, std::string>> SceneConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  auto put = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
  put("site.latitude", format_double(site.latitude_deg));
  put("site.longitude", format_double(site.longitude_deg));
  put("receiver.centre", vec_string(scene.receiver.centre));
  put("receiver.diameter", format_double(scene.receiver.diameter));
  put("receiver.grid_cells", std::to_string(scene.receiver.grid.cells_y));
  put("receiver.grid_extent", format_double(scene.receiver.grid.extent_y));
  put("sunshape.kind", to_string(scene.sunshape.kind));
  put("sunshape.half_angle_mrad", format_double(scene.sunshape.half_angle * 1e3));
  put("sunshape.limb_coefficient", format_double(scene.sunshape.limb_coefficient));
  for (std::size_t k = 0; k < scene.heliostats.size(); ++k) {
    const HeliostatSpec& h = scene.heliostats[k];
    const std::string p = "heliostat[" + std::to_string(k) + "].";
    put(p + "name", h.name);
    put(p + "position", vec_string(h.position));
    put(p + "width", format_double(h.width));
    put(p + "height", format_double(h.height));
    put(p + "modules_across", std::to_string(h.modules_across));
    put(p + "modules_up", std::to_string(h.modules_up));
    put(p + "module_width", format_double(h.module_width));
    put(p + "module_height", format_double(h.module_height));
    put(p + "focal_length", format_double(h.focal_length));
    put(p + "reflectivity", format_double(h.reflectivity));
  }
  put("reference.sun", reference_mode);
  put("reference.azimuth", format_double(scene.reference_sun.azimuth_deg));
  put("reference.elevation", format_double(scene.reference_sun.elevation_deg));
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const ScheduleEntry& e = schedule[k];
    put("schedule[" + std::to_string(k) + "]", e.label + ", " + format_double(e.sun.azimuth_deg) + ", " +
                                                   format_double(e.sun.elevation_deg) + ", " +
                                                   schedule_sources[k]);
  }
  put("run.engine", to_string(engine));
  put("run.output", output_dir.string());
  put("run.samples", std::to_string(scene.sampling.surface));
  put("run.radial_nodes", std::to_string(scene.sampling.radial));
  put("run.azimuthal_nodes", std::to_string(scene.sampling.azimuthal));
  put("run.dni", format_double(scene.dni));
  std::vector<std::string> v;
  for (CantingVariant x : variants) v.push_back(to_string(x));
  put("run.variants", join(v));
  std::vector<std::string> c;
  for (Case x : cases) c.push_back(to_string(x));
  put("run.cases", join(c));
  return out;
}

SceneConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

}  // namespace heliocant
