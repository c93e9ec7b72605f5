#include <CLI11.hpp>
#include <fmt/format.h>

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "apdg/errors.hpp"
#include "apdg_tools/config.hpp"
#include "apdg_tools/harness.hpp"

namespace {

int run_config(const std::string& file, apdg::tools::ExperimentKind expected) {
  auto cfg = apdg::tools::parse_config(file);
  if (cfg.kind != expected) {
    throw apdg::ConfigError(fmt::format("config {} has kind = {}, expected {}", file,
                                        apdg::tools::to_string(cfg.kind),
                                        apdg::tools::to_string(expected)));
  }
  for (const auto& p : apdg::tools::run_experiment(cfg)) std::cout << p.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic-preserving DG-IMEX solver for two-velocity kinetic models"};
  app.require_subcommand(1);

  std::string config;
  auto* converge = app.add_subcommand("converge", "Convergence table against an exact solution");
  converge->add_option("config", config, "Experiment config file")->required();
  auto* riemann = app.add_subcommand("riemann", "Riemann or Barenblatt profiles at T");
  riemann->add_option("config", config, "Experiment config file")->required();
  auto* ap = app.add_subcommand("ap-check", "Kinetic solver against the limiting scheme");
  ap->add_option("config", config, "Experiment config file")->required();

  std::vector<std::string> csvs;
  std::string script = "plot.gp";
  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for profile CSVs");
  plot->add_option("csv", csvs, "Profile CSV files")->required();
  plot->add_option("-o,--output", script, "Script path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    using apdg::tools::ExperimentKind;
    if (*converge) return run_config(config, ExperimentKind::Converge);
    if (*riemann) return run_config(config, ExperimentKind::Riemann);
    if (*ap) return run_config(config, ExperimentKind::ApCheck);
    if (*plot) {
      std::vector<std::filesystem::path> paths(csvs.begin(), csvs.end());
      apdg::tools::emit_plot_script(paths, script);
      std::cout << script << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "apdg: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
