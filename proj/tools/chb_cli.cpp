// Command-line driver: run a scenario, run the verification suite, or compare
// the phase fields of two runs.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "chb/config.hpp"
#include "chb/output.hpp"
#include "chb/solvers.hpp"
#include "chb/verify.hpp"

namespace fs = std::filesystem;

namespace {

int run_command(const std::string& config_path, const std::string& scenario_name,
                const std::string& out_dir) {
  chb::SimConfig cfg = config_path.empty() ? chb::parse_config("") : chb::load_config(config_path);
  if (!scenario_name.empty()) {
    cfg.scenario = chb::Scenario::make(chb::parse_scenario_kind(scenario_name));
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  chb::validate_config(cfg);

  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "config.yaml");
    out << chb::serialize_config(cfg);
  }

  const chb::StructuredGrid grid(cfg.nx, cfg.ny);
  const chb::CoupledProblem problem(grid, cfg.material, cfg.coupling, cfg.scenario, cfg.sources);
  const chb::SimState init = problem.initial_condition(cfg.circles, cfg.interface_width);

  std::vector<chb::EnergyReport> energies;
  const auto start = std::chrono::steady_clock::now();
  chb::SimulationObserver observer;
  observer.snapshot_interval = cfg.snapshot_interval;
  observer.on_energy = [&](const chb::EnergyReport& r) { energies.push_back(r); };
  observer.on_snapshot = [&](const chb::SimState& s, chb::Index step) {
    chb::write_snapshot(dir, grid, s, cfg.scenario.kind, step);
    chb::write_energy_csv(dir / "energy.csv", energies);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] step %6lld  t = %.4f  E_tot = %.10e  (%.1f s)\n",
                std::string(chb::to_string(cfg.scenario.kind)).c_str(),
                static_cast<long long>(step), s.time, energies.back().e_total, elapsed);
    std::fflush(stdout);
  };

  const chb::SimulationResult result = chb::run_simulation(problem, init, observer);
  chb::write_energy_csv(dir / "energy.csv", result.energies);
  int max_sweeps = 0;
  for (int s : result.sweeps) max_sweeps = std::max(max_sweeps, s);
  std::printf("done: %zu steps, max staggered sweeps per step %d, output in %s\n",
              result.sweeps.size(), max_sweeps, dir.string().c_str());
  return 0;
}

int verify_command(chb::Index n, std::uint64_t seed) {
  const auto results = chb::verify::run_all(n, seed);
  bool ok = true;
  std::printf("%-36s %-12s %-10s %s\n", "check", "value", "tolerance", "result");
  for (const auto& r : results) {
    std::printf("%-36s %-12.3e %-10.1e %s\n", r.name.c_str(), r.value, r.tolerance,
                r.passed ? "PASS" : "FAIL");
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int compare_command(const std::string& a, const std::string& b) {
  const auto series = chb::compare_runs(a, b);
  std::printf("step,time,relative_l2\n");
  for (const auto& d : series) {
    std::printf("%lld,%s,%s\n", static_cast<long long>(d.step), chb::format_number(d.time).c_str(),
                chb::format_number(d.relative_l2).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cahn-Hilliard-Biot phase-field poroelasticity simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one scenario and write energy.csv plus VTK snapshots");
  run->add_option("--config", config_path, "YAML configuration file")->check(CLI::ExistingFile);
  run->add_option("--scenario", scenario, "PressureDrop | ZeroPressure | CahnLarche");
  run->add_option("--out", out_dir, "Output directory");

  chb::Index n = 8;
  std::uint64_t seed = 42;
  auto* verify = app.add_subcommand("verify", "Gradient and oracle checks on a coarse grid");
  verify->add_option("--n", n, "Grid resolution (n x n)")->check(CLI::Range(2, 16));
  verify->add_option("--seed", seed, "Random seed for the verification states");

  std::string dir_a;
  std::string dir_b;
  auto* compare = app.add_subcommand("compare", "Relative L2 phase-field discrepancy between runs");
  compare->add_option("--a", dir_a, "First run directory")->required();
  compare->add_option("--b", dir_b, "Reference run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 && e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (*run) return run_command(config_path, scenario, out_dir);
    if (*verify) return verify_command(n, seed);
    if (*compare) return compare_command(dir_a, dir_b);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
