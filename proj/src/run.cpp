#include "heliocant/run.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "heliocant/error.hpp"
#include "heliocant/io.hpp"

namespace heliocant {
namespace fs = std::filesystem;

std::string version() { return HELIOCANT_VERSION; }

namespace {

// Labels such as "09h00" or ISO timestamps become safe file-name stems.
std::string file_stem(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out += c;
    else if (c != ':') out += '_';
  }
  return out.empty() ? "entry" : out;
}

std::string map_key(const std::string& label, CantingVariant v, Case c) {
  return file_stem(label) + "_" + to_string(v) + "_" + to_string(c);
}

class Staging {
 public:
  explicit Staging(fs::path final_dir) : final_(std::move(final_dir)) {
    const fs::path parent = final_.has_parent_path() ? final_.parent_path() : fs::path(".");
    dir_ = parent / (final_.filename().string() + ".staging");
    std::error_code ec;
    fs::remove_all(dir_, ec);
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create staging directory '" + dir_.string() + "': " + ec.message());
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = dir_ / rel;
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    write_file(p, content);
    files_.push_back(rel);
  }

  /// Moves every staged file into the final directory.
  std::vector<std::string> commit() {
    std::sort(files_.begin(), files_.end());
    for (const std::string& rel : files_) {
      const fs::path to = final_ / rel;
      std::error_code ec;
      fs::create_directories(to.parent_path(), ec);
      fs::rename(dir_ / rel, to, ec);
      if (ec) throw Error(ErrorCode::Io, "cannot move output into '" + to.string() + "': " + ec.message());
    }
    return files_;
  }

 private:
  fs::path final_;
  fs::path dir_;
  std::vector<std::string> files_;
};

std::string compiler_id() {
#if defined(__clang__)
  return std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  return std::string("gcc ") + __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace

RunSummary run(const SceneConfig& config, std::ostream* log) {
  using clock = std::chrono::steady_clock;
  const auto t_start = clock::now();
  auto elapsed = [](clock::time_point since) {
    return std::chrono::duration<double>(clock::now() - since).count();
  };

  config.validate();
  RunSummary summary;
  summary.output_dir = config.output_dir;
  Staging staging(config.output_dir);

  const Scene& scene = config.scene;

  // Canting tables, one per configured heliostat.
  for (const HeliostatSpec& h : scene.heliostats) {
    const CantingSet sph = compute_canting(scene, h, CantingVariant::spherical);
    const CantingSet off = compute_canting(scene, h, CantingVariant::off_axis);
    std::ostringstream os;
    write_canting_csv(os, h.name, canting_table(sph, off));
    staging.write("canting_" + file_stem(h.name) + ".csv", os.str());
  }

  std::vector<Engine> engines;
  if (config.engine != EngineSelection::grt) engines.push_back(Engine::conv);
  if (config.engine != EngineSelection::conv) engines.push_back(Engine::grt);

  std::map<Engine, std::map<std::string, FluxMap>> kept;
  std::size_t maps = 0;
  for (Engine engine : engines) {
    const auto t_engine = clock::now();
    DayCourseOptions opt;
    opt.variants = config.variants;
    opt.cases = config.cases;
    opt.engine = engine;
    opt.on_map = [&](const MapRecord& rec) {
      const std::string stem = "flux/" + map_key(rec.label, rec.variant, rec.scenario) + "_" + to_string(engine);
      std::ostringstream csv;
      write_flux_csv(csv, rec.map);
      staging.write(stem + ".csv", csv.str());
      std::ostringstream pgm;
      write_flux_pgm(pgm, rec.map);
      staging.write(stem + ".pgm", pgm.str());
      if (engines.size() > 1) kept[engine].emplace(map_key(rec.label, rec.variant, rec.scenario), rec.map);
      ++maps;
    };
    ConcentrationReport report = day_course(scene, config.schedule, opt);
    std::ostringstream os;
    write_report_csv(os, report);
    staging.write(engine == engines.front() ? "concentration.csv" : "concentration_" + to_string(engine) + ".csv",
                  os.str());
    summary.reports.emplace(engine, std::move(report));
    if (log) *log << "heliocant: " << to_string(engine) << " engine: " << elapsed(t_engine) << " s\n";
  }

  if (engines.size() > 1) {
    const ConcentrationReport& ref = summary.reports.at(Engine::grt);
    for (const ReportRow& r : ref.rows) {
      const std::string key = map_key(r.label, r.variant, r.scenario);
      const FluxMap& g = kept.at(Engine::grt).at(key);
      const FluxMap& c = kept.at(Engine::conv).at(key);
      summary.agreement.push_back({r.label, r.variant, r.scenario, rms_difference(g, c) / map_stats(g).peak});
    }
  }

  using json = nlohmann::ordered_json;
  json m;
  m["tool"] = "heliocant";
  m["version"] = version();
  m["compiler"] = compiler_id();
  m["fftw"] = std::string(fftw_version);
  m["simd_isa"] = std::string(to_string(simd::active_isa()));
  json echo = json::object();
  for (const auto& [k, v] : config.echo()) echo[k] = v;
  m["config"] = echo;
  m["config_source"] = config.source;

  const int cone_nodes = scene.sunshape.half_angle > 0.0 ? scene.sampling.radial * scene.sampling.azimuthal : 1;
  m["work"] = {
      {"engines", json::array()},
      {"heliostats", scene.heliostats.size()},
      {"schedule_entries", config.schedule.size()},
      {"flux_maps", maps},
      {"surface_samples_per_facet", scene.sampling.surface * scene.sampling.surface},
      {"sun_cone_nodes", cone_nodes},
      {"grid_cells", scene.receiver.grid.size()},
  };
  for (Engine e : engines) m["work"]["engines"].push_back(to_string(e));

  json gains = json::object();
  for (const auto& [engine, report] : summary.reports) {
    json per = json::object();
    for (Case c : config.cases) {
      json row = json::object();
      for (const std::string& l : report.labels) {
        const double g = report.gain(l, c);
        row[l] = std::isfinite(g) ? json(g) : json(nullptr);
      }
      per[to_string(c)] = row;
    }
    gains[to_string(engine)] = per;
  }
  m["concentration_gain"] = gains;

  if (!summary.agreement.empty()) {
    double worst = 0.0;
    json list = json::array();
    for (const EngineAgreement& a : summary.agreement) {
      worst = std::max(worst, a.rms_over_peak);
      list.push_back({{"label", a.label},
                      {"variant", to_string(a.variant)},
                      {"case", to_string(a.scenario)},
                      {"rms_over_peak", a.rms_over_peak}});
    }
    m["engine_agreement"] = {{"metric", "rms(grt - conv) / peak(grt)"},
                             {"threshold", kEngineAgreementThreshold},
                             {"max", worst},
                             {"pass", worst <= kEngineAgreementThreshold},
                             {"maps", list}};
  }

  // Every other artifact, sorted; the manifest itself is not listed.
  m["outputs"] = json::array();
  std::vector<std::string> names;
  names.reserve(maps * 2 + 8);
  for (const HeliostatSpec& h : scene.heliostats) names.push_back("canting_" + file_stem(h.name) + ".csv");
  for (Engine e : engines) {
    names.push_back(e == engines.front() ? "concentration.csv" : "concentration_" + to_string(e) + ".csv");
  }
  for (const auto& [engine, report] : summary.reports) {
    for (const ReportRow& r : report.rows) {
      const std::string stem = "flux/" + map_key(r.label, r.variant, r.scenario) + "_" + to_string(engine);
      names.push_back(stem + ".csv");
      names.push_back(stem + ".pgm");
    }
  }
  std::sort(names.begin(), names.end());
  for (const std::string& n : names) m["outputs"].push_back(n);

  summary.manifest = m.dump(2) + "\n";
  staging.write("manifest.json", summary.manifest);
  summary.outputs = staging.commit();
  if (log) *log << "heliocant: wrote " << summary.outputs.size() << " files to " << config.output_dir.string()
                << " in " << elapsed(t_start) << " s\n";
  return summary;
}

}  // namespace heliocant
