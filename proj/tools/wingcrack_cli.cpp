#include <cstdio>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "wingcrack/benchmarks.hpp"
#include "wingcrack/driver.hpp"

namespace {

int verify_table() {
  std::vector<wingcrack::benchmarks::Check> checks;
  try {
    checks = wingcrack::benchmarks::verify();
  } catch (const wingcrack::Error& e) {
    std::cerr << "verification aborted: " << e.what() << '\n';
    return 2;
  }
  bool all = true;
  std::cout << std::left << std::setw(40) << "benchmark" << std::right << std::setw(14) << "value" << std::setw(14)
            << "expected" << std::setw(12) << "tolerance" << "  result\n";
  for (const auto& c : checks) {
    std::cout << std::left << std::setw(40) << c.name << std::right << std::setprecision(6) << std::setw(14) << c.value
              << std::setw(14) << c.expected << std::setw(12) << c.tolerance << "  " << (c.passed ? "PASS" : "FAIL")
              << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static wing-crack growth simulator"};
  bool verify = false;
  app.add_flag("--verify", verify, "Run the built-in oracle benchmarks and print a pass/fail table");
  app.require_subcommand(0, 1);

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  std::string scenario_path, output_dir;
  int max_steps = -1, vtk_every = -1;
  bool quiet = false, permissive = false;
  run_cmd->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
  run_cmd->add_option("--output-dir", output_dir, "Override output.directory");
  run_cmd->add_option("--max-steps", max_steps, "Override growth.max_total_steps")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--vtk-every", vtk_every, "Write a VTK snapshot every n steps (0 disables)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--quiet", quiet, "Suppress progress output");
  run_cmd->add_flag("--permissive", permissive, "Warn about unknown scenario keys instead of failing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (verify) return verify_table();
  if (!*run_cmd) {
    std::cerr << app.help();
    return 1;
  }

  wingcrack::Scenario scenario;
  try {
    scenario = wingcrack::parse_scenario_file(
        scenario_path, permissive ? wingcrack::ParseMode::Permissive : wingcrack::ParseMode::Strict);
  } catch (const wingcrack::Error& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return 1;
  }

  wingcrack::RunOptions options;
  if (!output_dir.empty()) options.output_dir = output_dir;
  if (max_steps >= 0) options.max_steps = max_steps;
  if (vtk_every >= 0) options.vtk_every = vtk_every;
  if (!quiet) options.log = &std::cout;
  wingcrack::RunResult result;
  try {
    result = wingcrack::run(scenario, options);
  } catch (const wingcrack::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  if (!quiet)
    std::cout << "terminated: " << wingcrack::to_string(result.termination) << " (" << result.message << "), "
              << result.records.size() << " records, " << result.growth_steps << " growth steps\n";
  if (result.termination == wingcrack::Termination::Error) {
    std::cerr << "solver failure: " << result.message << '\n';
    return 2;
  }
  return 0;
}
