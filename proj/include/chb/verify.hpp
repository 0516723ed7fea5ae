#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chb/solvers.hpp"

namespace chb::verify {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Fields of a monolithic solve together with the Newton history.
struct MonolithicResult {
  SimState state;
  int iterations = 0;
  double residual = 0.0;
};

/// Dense Newton solve of the fully coupled discrete step (all five equations
/// at once) with a finite-difference Jacobian. Only meant for grids of a few
/// hundred unknowns; it shares the assembly primitives but none of the
/// staggered solver code.
MonolithicResult monolithic_step(const CoupledProblem& problem, const SimState& old,
                                 double tol = 1e-13, int max_iterations = 40);

/// Residual of the monolithic system for `next` given `old` (scaled rows).
Vector monolithic_residual(const CoupledProblem& problem, const SimState& old, const SimState& next);

/// Largest relative L2 difference over phi, mu, u, p, q.
double max_field_difference(const SimState& a, const SimState& b);

CheckResult check_gradient(const StructuredGrid& grid, const MaterialTable& mat,
                           GradientDirection direction, std::uint64_t seed);
CheckResult check_monolithic(Index n, ScenarioKind kind, std::uint64_t seed);
CheckResult check_flow_exactness(Index n);
CheckResult check_patch_test(Index nx, Index ny);
CheckResult check_mass_conservation(Index n, int steps);

/// All coarse-grid checks run by the `verify` subcommand.
std::vector<CheckResult> run_all(Index n = 8, std::uint64_t seed = 42);

}  // namespace chb::verify
