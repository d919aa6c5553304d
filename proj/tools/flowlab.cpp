// flowlab <scenario> --config <path> [--out <dir>] [--seed <u64>]
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure, 1 I/O.

#include <chrono>
#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "flowlab/cli/scenarios.hpp"

using namespace flowlab;

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for the flowlab geometric flow library"};
  std::string scenario;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("scenario", scenario, "Scenario to run")
      ->required()
      ->check(CLI::IsMember(cli::scenario_names()));
  app.add_option("--config", config_path, "Flat JSON config")->required();
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (default: config 'output' or .)");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (default: config 'seed' or 0)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const cli::Json config = cli::load_config(config_path);
    if (!seed_opt->count() && config.contains("seed")) {
      if (!config["seed"].is_number_unsigned()) throw Error(ErrorKind::Validation, "config key 'seed' must be a non-negative integer");
      seed = config["seed"].get<std::uint64_t>();
    }
    if (!out_opt->count()) {
      out_dir = ".";
      if (config.contains("output")) {
        if (!config["output"].is_string()) throw Error(ErrorKind::Validation, "config key 'output' must be a string");
        out_dir = config["output"].get<std::string>();
      }
    }
    const auto start = std::chrono::steady_clock::now();
    auto result = cli::run_scenario(scenario, config, seed);
    result.summary["config"]["output"] = out_dir;
    const auto paths = cli::emit_report(result.table, result.summary, out_dir, scenario);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << scenario << ": " << result.table.rows.size() << " records, "
              << (result.summary.value("pass", false) ? "pass" : "FAIL") << " (" << secs << " s)\n"
              << "  " << paths.csv.string() << "\n  " << paths.json.string() << "\n";
    return 0;
  } catch (const FlowError& e) {
    std::cerr << "flowlab: " << e.what() << " [failing time " << e.time() << "]\n";
    return cli::exit_code(e.kind());
  } catch (const Error& e) {
    std::cerr << "flowlab: " << e.what() << "\n";
    return cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "flowlab: internal error: " << e.what() << "\n";
    return 1;
  }
}
