// Acceptance suite. Each criterion prints one PASS/FAIL line; the exit code is
// nonzero when any selected criterion fails.
//
//   chb_acceptance [criteria ...] [--out DIR]

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "chb/config.hpp"
#include "chb/output.hpp"
#include "chb/solvers.hpp"
#include "chb/verify.hpp"

namespace fs = std::filesystem;
using namespace chb;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Run {
  SimulationResult result;
  double seconds = 0.0;
};

Run run_scenario(Index n, ScenarioKind kind, double t_end, const fs::path& snapshot_dir = {},
                 Index snapshot_interval = 25) {
  const auto start = std::chrono::steady_clock::now();
  const StructuredGrid grid(n, n);
  CouplingConfig coupling;
  coupling.tau = 1e-3;
  coupling.t_end = t_end;
  const CoupledProblem problem(grid, MaterialTable{}, coupling, Scenario::make(kind));
  const SimState init = problem.initial_condition(default_circles(), 2.0 / static_cast<double>(n));
  SimulationObserver observer;
  observer.snapshot_interval = snapshot_interval;
  if (!snapshot_dir.empty()) {
    fs::create_directories(snapshot_dir);
    observer.on_snapshot = [&](const SimState& s, Index step) {
      write_snapshot(snapshot_dir, grid, s, kind, step);
    };
  }
  Run run;
  run.result = run_simulation(problem, init, observer);
  run.seconds = seconds_since(start);
  if (!snapshot_dir.empty()) write_energy_csv(snapshot_dir / "energy.csv", run.result.energies);
  return run;
}

constexpr ScenarioKind kAllScenarios[] = {ScenarioKind::PressureDrop, ScenarioKind::ZeroPressure,
                                          ScenarioKind::CahnLarche};

Outcome gradient_consistency(const fs::path&) {
  const auto start = std::chrono::steady_clock::now();
  const StructuredGrid grid(8, 8);
  const MaterialTable mat;
  bool ok = true;
  std::string detail;
  for (const auto& [dir, name] : {std::pair{GradientDirection::Phi, std::string("phi")},
                                  std::pair{GradientDirection::U, std::string("u")},
                                  std::pair{GradientDirection::Theta, std::string("theta")}}) {
    for (std::uint64_t seed : {42u, 7u, 2024u}) {
      const verify::CheckResult r = verify::check_gradient(grid, mat, dir, seed);
      ok = ok && r.passed;
      if (seed == 42u) detail += name + fmt(" %.2e (tol %.0e)  ", r.value, r.tolerance);
    }
  }
  const double secs = seconds_since(start);
  detail += fmt("runtime %.1f s (limit 10 s)", secs);
  return {ok && secs < 10.0, detail};
}

Outcome monolithic_equivalence(const fs::path&) {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (Index n : {4, 8}) {
    const verify::CheckResult r = verify::check_monolithic(n, ScenarioKind::PressureDrop, 42);
    ok = ok && r.passed;
    detail += fmt("%gx%g max rel L2 %.2e  ", static_cast<double>(n), static_cast<double>(n), r.value);
  }
  const double secs = seconds_since(start);
  detail += fmt("(tol 1e-8) runtime %.1f s (limit 30 s)", secs);
  return {ok && secs < 30.0, detail};
}

Outcome energy_dissipation(const fs::path& out) {
  double total_secs = 0.0;
  bool ok = true;
  std::string detail;
  for (ScenarioKind kind : kAllScenarios) {
    const Run run = run_scenario(33, kind, 0.2, out / "energy" / std::string(to_string(kind)), 100);
    total_secs += run.seconds;
    const auto& e = run.result.energies;
    const double slack = 1e-8 * std::max(1.0, std::abs(e.front().e_total));
    double worst = -INFINITY;
    double worst_with_work = -INFINITY;
    int violations = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
      const double inc = e[i].e_total - e[i - 1].e_total;
      worst = std::max(worst, inc);
      if (inc > slack) ++violations;
      const double ew = e[i].e_chemical + e[i].e_elastic + e[i].e_fluid +
                        e[i].boundary_work_accumulated;
      const double ew_prev = e[i - 1].e_chemical + e[i - 1].e_elastic + e[i - 1].e_fluid +
                             e[i - 1].boundary_work_accumulated;
      worst_with_work = std::max(worst_with_work, ew - ew_prev);
    }
    ok = ok && violations == 0;
    std::printf("    %-13s max step increase of E_tot %+.3e (%d of %zu steps above slack %.0e); "
                "with accumulated boundary work %+.3e\n",
                std::string(to_string(kind)).c_str(), worst, violations, e.size() - 1, slack,
                worst_with_work);
  }
  detail = fmt("33x33, 200 steps, runtime %.1f s (limit 300 s)", total_secs);
  return {ok && total_secs < 300.0, detail};
}

Outcome mass_conservation(const fs::path&) {
  bool ok = true;
  double worst = 0.0;
  for (ScenarioKind kind : kAllScenarios) {
    const StructuredGrid grid(33, 33);
    CouplingConfig coupling;
    coupling.t_end = 0.2;
    const CoupledProblem problem(grid, MaterialTable{}, coupling, Scenario::make(kind));
    const SimState init = problem.initial_condition(default_circles(), 2.0 / 33.0);
    const Vector ones = Vector::Ones(grid.num_nodes());
    const SparseMatrix mass = assemble_q1_mass(grid, QuadratureField(grid, 1.0));
    const double m0 = ones.dot(mass * init.phi);
    double drift = 0.0;
    SimulationObserver observer;
    observer.snapshot_interval = 1;
    observer.on_snapshot = [&](const SimState& s, Index) {
      drift = std::max(drift, std::abs(ones.dot(mass * s.phi) - m0) / std::abs(m0));
    };
    run_simulation(problem, init, observer);
    std::printf("    %-13s max relative drift of the phase mass %.3e\n",
                std::string(to_string(kind)).c_str(), drift);
    worst = std::max(worst, drift);
    ok = ok && drift < 1e-10;
  }
  return {ok, fmt("33x33, 200 steps, worst drift %.2e (tol 1e-10)", worst)};
}

Outcome flow_exactness(const fs::path&) {
  bool ok = true;
  double worst = 0.0;
  for (Index n : {4, 16, 33}) {
    const verify::CheckResult r = verify::check_flow_exactness(n);
    ok = ok && r.passed;
    worst = std::max(worst, r.value);
  }
  return {ok, fmt("max edge error vs kappa * 0.25 over 4/16/33 grids %.2e (tol 1e-12)", worst)};
}

Outcome patch_test(const fs::path&) {
  bool ok = true;
  double worst = 0.0;
  for (auto [nx, ny] : {std::pair<Index, Index>{2, 2}, {5, 3}, {16, 16}, {33, 17}}) {
    const verify::CheckResult r = verify::check_patch_test(nx, ny);
    ok = ok && r.passed;
    worst = std::max(worst, r.value);
  }
  return {ok, fmt("max nodal error %.2e (tol 1e-12)", worst)};
}

Outcome scenario_ordering(const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path base = out / "ordering";
  std::map<ScenarioKind, fs::path> dirs;
  for (ScenarioKind kind : kAllScenarios) {
    dirs[kind] = base / std::string(to_string(kind));
    fs::remove_all(dirs[kind]);
    run_scenario(33, kind, 0.5, dirs[kind], 25);
  }
  const auto pd = compare_runs(dirs[ScenarioKind::PressureDrop], dirs[ScenarioKind::CahnLarche]);
  const auto zp = compare_runs(dirs[ScenarioKind::ZeroPressure], dirs[ScenarioKind::CahnLarche]);
  double d_pd = NAN;
  double d_zp = NAN;
  int ordered = 0;
  int compared = 0;
  for (std::size_t i = 0; i < pd.size() && i < zp.size(); ++i) {
    if (pd[i].step != zp[i].step || pd[i].step == 0) continue;
    ++compared;
    if (zp[i].relative_l2 < pd[i].relative_l2) ++ordered;
    if (pd[i].step == 500) {
      d_pd = pd[i].relative_l2;
      d_zp = zp[i].relative_l2;
    }
  }
  const double ratio = d_pd / d_zp;
  const double secs = seconds_since(start);
  std::printf("    t = 0.5: PD vs CHE %.4e, CHB0 vs CHE %.4e; ordering holds at %d of %d "
              "output times\n", d_pd, d_zp, ordered, compared);
  return {std::isfinite(ratio) && ratio >= 2.0 && secs < 600.0,
          fmt("ratio %.3g (need >= 2), runtime %.1f s (limit 600 s)", ratio, secs)};
}

Outcome full_scale(const fs::path& out) {
  const fs::path dir = out / "full_scale";
  fs::remove_all(dir);
  const Run run = run_scenario(65, ScenarioKind::PressureDrop, 1.0, dir, 25);
  int max_sweeps = 0;
  for (int s : run.result.sweeps) max_sweeps = std::max(max_sweeps, s);
  bool snapshots = true;
  for (Index step : {0, 75, 500, 1000}) {
    snapshots = snapshots && fs::exists(dir / snapshot_filename(ScenarioKind::PressureDrop, step));
  }
  const bool ok = run.result.sweeps.size() == 1000 && max_sweeps <= 100 && snapshots &&
                  run.seconds < 3600.0;
  std::string detail = fmt("65x65, %g steps, max sweeps %g (limit 100), runtime %.0f s",
                           static_cast<double>(run.result.sweeps.size()),
                           static_cast<double>(max_sweeps), run.seconds);
  detail += snapshots ? ", snapshots 0/75/500/1000 written to " + dir.string()
                      : ", missing snapshots";
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  std::string out = "acceptance_output";
  app.add_option("criteria", selected, "Criteria to run (default: all)")->check(CLI::Range(1, 8));
  app.add_option("--out", out, "Directory for run artifacts");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

  const std::map<int, std::pair<const char*, std::function<Outcome(const fs::path&)>>> criteria{
      {1, {"gradient consistency", gradient_consistency}},
      {2, {"monolithic-oracle equivalence", monolithic_equivalence}},
      {3, {"energy dissipation", energy_dissipation}},
      {4, {"mass conservation", mass_conservation}},
      {5, {"flow exactness", flow_exactness}},
      {6, {"elasticity patch test", patch_test}},
      {7, {"scenario ordering", scenario_ordering}},
      {8, {"full-scale run", full_scale}},
  };

  int failures = 0;
  for (int id : selected) {
    const auto& [name, fn] = criteria.at(id);
    Outcome o;
    try {
      o = fn(fs::path(out));
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("[%s] criterion %d %s: %s\n", o.passed ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
