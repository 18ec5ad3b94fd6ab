// heliocant command line: `heliocant run [options] SCENE`.

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "heliocant/config.hpp"
#include "heliocant/error.hpp"
#include "heliocant/run.hpp"

namespace {

// One line, so scripts can split on the first two colons.
int report_error(std::string_view code, std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  std::cerr << "error: " << code << ": " << msg << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heliostat canting optimizer and receiver flux simulator", "heliocant"};
  app.set_version_flag("--version", heliocant::version());
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Compute canting, flux maps and the concentration report");
  std::string scene_path;
  std::optional<std::string> engine;
  std::optional<std::string> out;
  std::optional<int> grid;
  std::optional<int> samples;
  bool validate_only = false;
  run->add_option("scene", scene_path, "Scene file")->required();
  run->add_option("--engine", engine, "Flux engine")->check(CLI::IsMember({"grt", "conv", "both"}));
  run->add_option("--out", out, "Output directory");
  run->add_option("--grid", grid, "Receiver grid cells per side (even)")->check(CLI::PositiveNumber);
  run->add_option("--samples", samples, "Surface samples per facet side (N_s)")->check(CLI::PositiveNumber);
  run->add_flag("--validate-only", validate_only, "Parse and validate, print the effective parameters, exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("invalid_argument", e.what());
  }

  try {
    heliocant::SceneConfig cfg = heliocant::load_config(scene_path);
    if (engine) cfg.engine = heliocant::parse_engine_selection(*engine);
    if (out) cfg.output_dir = *out;
    if (grid) cfg.scene.receiver.grid.cells_y = cfg.scene.receiver.grid.cells_z = *grid;
    if (samples) cfg.scene.sampling.surface = *samples;
    cfg.validate();

    if (validate_only) {
      for (const auto& [key, value] : cfg.echo()) std::cout << key << " = " << value << '\n';
      return 0;
    }
    const heliocant::RunSummary summary = heliocant::run(cfg, &std::cerr);
    for (const std::string& f : summary.outputs) std::cout << (summary.output_dir / f).string() << '\n';
    return 0;
  } catch (const heliocant::Error& e) {
    return report_error(heliocant::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
}
