#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "chb/energy.hpp"
#include "chb/material.hpp"
#include "chb/state.hpp"

namespace chb {

struct CouplingConfig {
  double stagger_tol = 1e-6;
  int stagger_max = 100;
  double newton_tol = 1e-10;
  int newton_max = 50;
  double tau = 1e-3;
  double t_end = 1.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool operator==(const CouplingConfig&) const = default;
};

/// Spatially uniform volumetric sources and body force (all zero by default).
struct Sources {
  double reaction = 0.0;
  double fluid_source = 0.0;
  Point body_force{};

  bool operator==(const Sources& o) const {
    return reaction == o.reaction && fluid_source == o.fluid_source &&
           body_force.x == o.body_force.x && body_force.y == o.body_force.y;
  }
};

struct Circle {
  Point center;
  double radius = 0.0;

  bool operator==(const Circle& o) const {
    return center.x == o.center.x && center.y == o.center.y && radius == o.radius;
  }
};

/// Four circles of radius 0.15 at (0.3|0.7, 0.3|0.7).
std::vector<Circle> default_circles();

class NewtonError : public std::runtime_error {
 public:
  NewtonError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class StaggerError : public std::runtime_error {
 public:
  StaggerError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct ChResult {
  Vector phi;
  Vector mu;
  int iterations = 0;
  double residual = 0.0;
};

struct FlowResult {
  Vector p;
  Vector q;
  Vector theta;
};

struct StepResult {
  SimState state;
  int sweeps = 0;
  /// Max relative field increment of every sweep.
  std::vector<double> increments;
};

/// Relative increment ||a - b|| / max(||a||, 1e-12).
double relative_increment(const Vector& next, const Vector& prev);

/// Time-discrete coupled problem: convex-split semi-implicit Euler, solved by
/// Cahn-Hilliard -> elasticity -> flow sweeps until the increments settle.
class CoupledProblem {
 public:
  CoupledProblem(const StructuredGrid& grid, const MaterialTable& material,
                 const CouplingConfig& coupling, const Scenario& scenario,
                 const Sources& sources = {});

  const StructuredGrid& grid() const { return grid_; }
  const MaterialTable& material() const { return material_; }
  const CouplingConfig& coupling() const { return coupling_; }
  const Scenario& scenario() const { return scenario_; }
  const Sources& sources() const { return sources_; }

  /// phi = tanh(d / width) with d the signed distance to the union of circles
  /// (positive inside); u, p, q zero; mu from the chemical-potential equation.
  SimState initial_condition(std::span<const Circle> circles, double width) const;

  /// Newton solve of the Cahn-Hilliard pair with u frozen at `iter`. With flow
  /// enabled theta is frozen and p follows phi; otherwise p is taken from `iter`.
  ChResult solve_ch(const SimState& old, const SimState& iter) const;
  /// Zero-Dirichlet elasticity with phi and p frozen at `iter`.
  Vector solve_elasticity(const SimState& iter) const;
  /// Mixed RT0/P0 backward-Euler flow step with phi and u frozen at `iter`.
  FlowResult solve_flow(const SimState& old, const SimState& iter) const;

  StepResult staggered_step(const SimState& old) const;

  /// Full discrete residual blocks, used to check converged states.
  Vector elasticity_residual(const SimState& s) const;

 private:
  Vector nodal_reaction() const;

  StructuredGrid grid_;
  MaterialTable material_;
  CouplingConfig coupling_;
  Scenario scenario_;
  Sources sources_;

  SparseMatrix mass_;
  SparseMatrix laplace_;
  SparseMatrix divergence_;
  std::vector<Index> boundary_vector_dofs_;
  std::vector<Index> noflow_edges_;
  Vector lumped_mass_;

  mutable LinearSolver ch_solver_{SolverHint::SymmetricIndefinite};
  mutable LinearSolver elastic_solver_{SolverHint::SPD};
  mutable LinearSolver flow_solver_{SolverHint::SymmetricIndefinite};
};

struct SimulationObserver {
  std::function<void(const EnergyReport&)> on_energy;
  std::function<void(const SimState&, Index step)> on_snapshot;
  Index snapshot_interval = 25;
};

struct SimulationResult {
  SimState final_state;
  std::vector<EnergyReport> energies;
  std::vector<int> sweeps;
};

/// Steps from `initial` to t_end (round(t_end / tau) steps). Reports energies
/// at t = 0 and after every step; snapshots at multiples of the interval and
/// at the final step.
SimulationResult run_simulation(const CoupledProblem& problem, const SimState& initial,
                                const SimulationObserver& observer = {});

}  // namespace chb
