#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "covertsim/harness.hpp"

namespace ch = covertsim::harness;

int main(int argc, char** argv) {
  CLI::App app{"Covert communication design and simulation tool"};
  std::string command;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 42;
  std::int64_t trials = 0;
  std::string format = "csv";

  std::string names;
  for (const auto& [cmd, name] : ch::kCommandNames) names += (names.empty() ? "" : "|") + std::string(name);
  app.add_option("command", command, names)->required();
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_path, "output file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "base RNG seed");
  auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials (>= 1000)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ch::kExitConfig;
  }

  const auto cmd = ch::parse_command(command);
  if (!cmd) {
    std::cerr << "config error: unknown command '" << command << "' (expected " << names << ")\n";
    return ch::kExitConfig;
  }

  ch::ExperimentSpec spec;
  spec.command = *cmd;
  spec.output_path = out_path;
  spec.format = format == "json" ? ch::Format::kJson : ch::Format::kCsv;
  try {
    spec.config = ch::load_config(config_path);
    if (*seed_opt) spec.config.simulation.seed = seed;
    if (*trials_opt) {
      spec.config.simulation.trials = trials;
      covertsim::validate(spec.config.simulation);
    }
  } catch (const covertsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ch::kExitConfig;
  }
  return ch::run(spec);
}
