#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "chb/energy.hpp"
#include "chb/state.hpp"

namespace chb {

inline constexpr const char* kEnergyCsvHeader =
    "time,e_chemical,e_elastic,e_fluid,boundary_term,boundary_work_accumulated,e_total";

/// 17 significant digits, shortest exponent form from "%.17g".
std::string format_number(double v);

std::string energy_csv(std::span<const EnergyReport> reports);
/// Throws std::runtime_error naming the path on filesystem failure.
void write_energy_csv(const std::filesystem::path& path, std::span<const EnergyReport> reports);
std::vector<EnergyReport> read_energy_csv(const std::filesystem::path& path);

/// "<scenario>_<step:06>.vtk"
std::string snapshot_filename(ScenarioKind kind, Index step);

/// Legacy ASCII VTK structured grid: phi, mu (point scalars), u (point
/// vectors), p, theta (cell scalars), q (cell-averaged vectors).
std::string snapshot_vtk(const StructuredGrid& grid, const SimState& state, ScenarioKind kind,
                         Index step);
std::filesystem::path write_snapshot(const std::filesystem::path& dir, const StructuredGrid& grid,
                                     const SimState& state, ScenarioKind kind, Index step);

struct SnapshotData {
  Index nx = 0;
  Index ny = 0;
  Index step = 0;
  double time = 0.0;
  std::string scenario;
  Vector phi;
  Vector p;
};

SnapshotData read_snapshot(const std::filesystem::path& path);

struct Discrepancy {
  Index step = 0;
  double time = 0.0;
  double relative_l2 = 0.0;
};

/// ||phi_a - phi_b||_{L2} / ||phi_b||_{L2} for every step both runs have
/// snapshots for, using the Q1 mass matrix.
std::vector<Discrepancy> compare_runs(const std::filesystem::path& a, const std::filesystem::path& b);
double relative_l2(const StructuredGrid& grid, const Vector& a, const Vector& b);

}  // namespace chb
