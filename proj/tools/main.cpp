#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "pmgame/errors.hpp"

int main(int argc, char** argv) {
  using namespace pmgame::cli;
  RunConfig config;
  std::string grid;
  std::string alpha0;
  std::string format;

  CLI::App app{"Prepare-and-measure game bounds and measurement certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--alpha0", alpha0, "Single alpha0 value (decimal or p/q)");
  app.add_option("--grid", grid, "alpha0 grid start:stop:step");
  app.add_option("--restarts", config.restarts, "Optimizer restarts per point")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Base random seed");
  app.add_option("--tol", config.tol, "Optimizer convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", config.output_path, "Output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--polygon-k", config.polygon_k, "Polygon sides for joint measurability")->check(CLI::Range(3, 4096));

  auto* curve = app.add_subcommand("curve", "Quantum and noncontextual values along alpha1 = alpha2");
  curve->add_flag("--classical", config.with_classical, "Add the constant classical column");
  app.add_subcommand("bounds", "Quantum, noncontextual and classical values at one alpha0");
  auto* simulate = app.add_subcommand("simulate", "Three-outcome simulation of the n-outcome equatorial POVM");
  simulate->add_option("n,-n,--n", config.n, "Odd number of outcomes")->check(CLI::Range(3, 1001));
  app.add_subcommand("incompat", "Incompatibility certificates for the five-outcome simulator set");
  app.add_subcommand("coherence", "Coherence detection by the trine and degenerate POVMs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  std::ofstream file;
  try {
    config.command = app.get_subcommands().front()->get_name();
    if (!alpha0.empty()) config.alpha0 = parse_number(alpha0);
    if (!grid.empty()) parse_grid(grid, config);
    if (!format.empty()) config.format = format == "csv" ? Format::csv : Format::json;
    if (config.command == "simulate" && config.n % 2 == 0) throw UsageError("n must be odd");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (!config.output_path.empty()) {
    file.open(config.output_path, std::ios::out | std::ios::trunc);
    if (!file) {
      std::cerr << "error: cannot write " << config.output_path << '\n';
      return kExitRuntime;
    }
  }
  std::ostream& out = config.output_path.empty() ? std::cout : file;
  try {
    const int code = run(config, out);
    out.flush();
    if (!out) {
      std::cerr << "error: write failed\n";
      return kExitRuntime;
    }
    return code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pmgame::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
