// spinwire: command-line front end for the state-transfer simulations.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/config.hpp"
#include "cli/runner.hpp"

namespace sc = spinwire::cli;

int main(int argc, char** argv) {
  CLI::App app{"spinwire - quantum state transfer through XY spin chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sc::kToolVersion);

  sc::RunOptions options;
  std::string config_path;
  std::string preset;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--set", options.overrides, "Override a config key, e.g. --set chain.n_sites=64")
        ->type_name("PATH=VALUE");
    cmd->add_option("--jobs", options.jobs, "Worker threads (default: logical CPU count)");
    cmd->add_option("--out", out_dir, "Output directory (default: $SPINWIRE_OUT/<name>)");
    cmd->add_option("--seed", seed, "Master seed; replaces disorder.seed and oracle.seed");
  };

  auto* run = app.add_subcommand("run", "Run a config file or a bundled preset");
  run->add_option("config", config_path, "JSON config file");
  run->add_option("--preset", preset, "Bundled preset name (see `spinwire presets`)");
  add_common(run);

  auto* list = app.add_subcommand("presets", "List bundled presets");
  auto* oracle = app.add_subcommand("oracle-check", "Compare reduced amplitudes with the full Hilbert space");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& p : sc::presets()) std::cout << p.name << "\t" << p.description << "\n";
    return sc::kExitOk;
  }

  if (out_dir) options.out_dir = *out_dir;
  options.seed = seed;

  sc::Json user;
  try {
    if (oracle->parsed()) {
      user = sc::find_preset("oracle").config;
    } else if (!preset.empty() && !config_path.empty()) {
      throw sc::ConfigError("run: give either a config file or --preset, not both");
    } else if (!preset.empty()) {
      user = sc::find_preset(preset).config;
    } else if (!config_path.empty()) {
      user = sc::load_file(config_path);
    } else {
      throw sc::ConfigError("run: a config file or --preset is required");
    }
  } catch (const sc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return sc::kExitConfig;
  }
  return sc::run_and_report(user, options, std::cerr, std::cerr);
}
