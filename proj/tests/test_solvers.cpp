#include <gtest/gtest.h>

#include <cmath>

#include "chb/solvers.hpp"
#include "chb/verify.hpp"

using namespace chb;

namespace {

CouplingConfig tight() {
  CouplingConfig c;
  c.stagger_tol = 1e-12;
  c.newton_tol = 1e-12;
  c.stagger_max = 400;
  return c;
}

double phase_mass(const StructuredGrid& g, const Vector& phi) {
  return Vector(assemble_q1_mass(g, QuadratureField(g, 1.0)) * phi).sum();
}

// Uniform phase at rest with the chemical potential that balances it.
SimState resting_state(const CoupledProblem& problem, double phi) {
  const StructuredGrid& g = problem.grid();
  SimState s = zero_state(g);
  s.phi.setConstant(phi);
  const Vector load = chemical_potential_load(g, problem.material(), s.phi, nullptr, s.u, s.p);
  s.mu = solve_sparse(assemble_q1_mass(g, QuadratureField(g, 1.0)), load, SolverHint::SPD);
  s.theta = cell_content(g, problem.material(), s.phi, s.u, s.p);
  return s;
}

MaterialTable decoupled_material() {
  MaterialTable m;
  m.xi = 0.0;
  m.alpha_minus = m.alpha_plus = 0.0;
  m.M_plus = m.M_minus;
  m.kappa_plus = m.kappa_minus;
  m.C_plus = m.C_minus;
  return m;
}

}  // namespace

TEST(CahnHilliard, PurePhaseIsFixedPoint) {
  const StructuredGrid g(6, 6);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::ZeroPressure));
  SimState s = zero_state(g);
  s.phi.setOnes();
  // u = T(1) x gives eps = T(1) everywhere.
  for (Index n = 0; n < g.num_nodes(); ++n) {
    const Point x = g.node_position(n);
    s.u[2 * n] = 0.3 * x.x;
    s.u[2 * n + 1] = 0.3 * x.y;
  }
  s.theta = cell_content(g, problem.material(), s.phi, s.u, s.p);
  const ChResult r = problem.solve_ch(s, s);
  EXPECT_LE((r.phi - s.phi).lpNorm<Eigen::Infinity>(), 1e-14);
  EXPECT_LE(r.mu.lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(CahnHilliard, ConservesMassUpToReaction) {
  const StructuredGrid g(8, 8);
  MaterialTable mat;
  mat.xi = 0.0;
  mat.alpha_minus = mat.alpha_plus = 0.0;
  Sources src;
  src.reaction = 0.4;
  const CoupledProblem problem(g, mat, CouplingConfig{}, Scenario::make(ScenarioKind::CahnLarche),
                               src);
  const SimState old = problem.initial_condition(default_circles(), 0.1);
  const ChResult r = problem.solve_ch(old, old);
  EXPECT_NEAR(phase_mass(g, r.phi), phase_mass(g, old.phi) + 1e-3 * 0.4, 1e-12);
}

TEST(CahnHilliard, StepMatchesMonolithicOracle) {
  // Pure Cahn-Larche step on 8x8 against the dense fully coupled Newton solve.
  const StructuredGrid g(8, 8);
  const MaterialTable mat;
  const CoupledProblem problem(g, mat, tight(), Scenario::make(ScenarioKind::CahnLarche));
  SimState old = random_smooth_state(g, mat, 12);
  for (Index n = 0; n < g.num_nodes(); ++n) {
    if (g.node_side(n) != BoundarySide::Interior) old.u[2 * n] = old.u[2 * n + 1] = 0.0;
  }
  old.p.setZero();
  old.q.setZero();
  old.theta = cell_content(g, mat, old.phi, old.u, old.p);
  const StepResult staggered = problem.staggered_step(old);
  const verify::MonolithicResult oracle = verify::monolithic_step(problem, old);
  EXPECT_LE(relative_increment(staggered.state.phi, oracle.state.phi), 1e-9);
  EXPECT_LE(relative_increment(staggered.state.mu, oracle.state.mu), 1e-9);
  EXPECT_LE(relative_increment(staggered.state.u, oracle.state.u), 1e-9);
}

TEST(CahnHilliard, FrozenContentJacobianIsExact) {
  // Pressure follows phi through the frozen content; an exact Jacobian keeps
  // Newton quadratic even with strongly phase-dependent M and alpha.
  const StructuredGrid g(8, 8);
  const MaterialTable mat;
  CouplingConfig cfg;
  cfg.newton_tol = 1e-13;
  const CoupledProblem problem(g, mat, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const SimState old = random_smooth_state(g, mat, 21);
  SimState iter = random_smooth_state(g, mat, 22);
  iter.theta = old.theta;
  const ChResult r = problem.solve_ch(old, iter);
  EXPECT_LE(r.iterations, 6);
  // The chemical potential balances the pressure recovered from the frozen content.
  const Vector p = cell_pressure(g, mat, r.phi, iter.u, iter.theta);
  const Vector load = chemical_potential_load(g, mat, r.phi, &old.phi, iter.u, p);
  const Vector balance = assemble_q1_mass(g, QuadratureField(g, 1.0)) * r.mu - load;
  EXPECT_LE(balance.lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(CahnHilliard, ReportsNonConvergence) {
  const StructuredGrid g(6, 6);
  CouplingConfig cfg;
  cfg.newton_max = 1;
  cfg.newton_tol = 1e-300;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::CahnLarche));
  const SimState s = problem.initial_condition(default_circles(), 0.1);
  try {
    problem.solve_ch(s, s);
    FAIL() << "expected NewtonError";
  } catch (const NewtonError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Elasticity, NoLoadNoDisplacement) {
  const StructuredGrid g(5, 5);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::ZeroPressure));
  const SimState s = zero_state(g);
  EXPECT_EQ(problem.solve_elasticity(s).lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Elasticity, SolutionHasSmallResidual) {
  const StructuredGrid g(10, 10);
  const MaterialTable mat;
  const CoupledProblem problem(g, mat, CouplingConfig{}, Scenario::make(ScenarioKind::PressureDrop));
  SimState s = random_smooth_state(g, mat, 4);
  s.u = problem.solve_elasticity(s);
  SimState unloaded = s;
  unloaded.u.setZero();
  const double scale = problem.elasticity_residual(unloaded).norm();
  EXPECT_LE(problem.elasticity_residual(s).norm(), 1e-10 * scale);
}

TEST(Elasticity, RespectsReflectionSymmetry) {
  const Index n = 16;
  const StructuredGrid g(n, n);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::ZeroPressure));
  const SimState s = problem.initial_condition(default_circles(), 2.0 / 16.0);
  const Vector u = problem.solve_elasticity(s);
  double err = 0.0;
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      const Index a = g.node_index(i, j);
      const Index mx = g.node_index(n - i, j);  // mirror in x = 1/2
      const Index my = g.node_index(i, n - j);  // mirror in y = 1/2
      err = std::max({err, std::abs(u[2 * a] + u[2 * mx]), std::abs(u[2 * a + 1] - u[2 * mx + 1]),
                      std::abs(u[2 * a] - u[2 * my]), std::abs(u[2 * a + 1] + u[2 * my + 1])});
    }
  }
  EXPECT_LE(err, 1e-9);
  EXPECT_GT(u.lpNorm<Eigen::Infinity>(), 1e-4);
}

TEST(Flow, NoDataNoFlow) {
  const StructuredGrid g(6, 6);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::ZeroPressure));
  SimState s = zero_state(g);
  s.phi.setConstant(0.2);
  s.theta = cell_content(g, problem.material(), s.phi, s.u, s.p);
  const FlowResult r = problem.solve_flow(s, s);
  EXPECT_EQ(r.p.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(r.q.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Flow, SteadyUniformDarcyFlux) {
  for (Index n : {4, 8, 16}) {
    const verify::CheckResult r = verify::check_flow_exactness(n);
    EXPECT_LE(r.value, 1e-12) << n;
  }
}

TEST(Flow, DisabledForCahnLarche) {
  const StructuredGrid g(4, 4);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::CahnLarche));
  const SimState s = zero_state(g);
  EXPECT_THROW(problem.solve_flow(s, s), std::logic_error);
}

TEST(Flow, LocalBalanceAndContentIdentity) {
  const StructuredGrid g(8, 8);
  const MaterialTable mat;
  Sources src;
  src.fluid_source = 0.3;
  const CoupledProblem problem(g, mat, CouplingConfig{}, Scenario::make(ScenarioKind::PressureDrop),
                               src);
  const SimState old = random_smooth_state(g, mat, 6);
  SimState iter = random_smooth_state(g, mat, 7);
  const FlowResult r = problem.solve_flow(old, iter);
  const Vector div = assemble_divergence(g) * r.q;
  const double tau = problem.coupling().tau;
  for (Index c = 0; c < g.num_cells(); ++c) {
    EXPECT_NEAR((r.theta[c] - old.theta[c]) / tau + div[c] / g.cell_area(), 0.3, 1e-9);
  }
  const Vector theta = cell_content(g, mat, iter.phi, iter.u, r.p);
  EXPECT_LE((theta - r.theta).lpNorm<Eigen::Infinity>(), 1e-12);
  for (Index e = 0; e < g.num_edges(); ++e) {
    const BoundarySide side = g.edge_side(e);
    if (side == BoundarySide::Left || side == BoundarySide::Right) EXPECT_EQ(r.q[e], 0.0);
  }
}

TEST(Staggered, EquilibriumConvergesInOneSweep) {
  const StructuredGrid g(6, 6);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::ZeroPressure));
  const SimState s = resting_state(problem, 1.0);
  const StepResult r = problem.staggered_step(s);
  EXPECT_EQ(r.sweeps, 1);
  ASSERT_EQ(r.increments.size(), 1u);
  EXPECT_LE(r.increments[0], 1e-14);
}

TEST(Staggered, DecoupledLimitNeedsTwoSweeps) {
  const StructuredGrid g(8, 8);
  const CoupledProblem problem(g, decoupled_material(), CouplingConfig{},
                               Scenario::make(ScenarioKind::PressureDrop));
  const SimState s = problem.initial_condition(default_circles(), 0.1);
  const StepResult r = problem.staggered_step(s);
  EXPECT_EQ(r.sweeps, 2);
}

TEST(Staggered, TighterToleranceAgrees) {
  const StructuredGrid g(16, 16);
  CouplingConfig loose;
  CouplingConfig strict;
  strict.stagger_tol = 1e-8;
  const Scenario pd = Scenario::make(ScenarioKind::PressureDrop);
  const CoupledProblem a(g, MaterialTable{}, loose, pd);
  const CoupledProblem b(g, MaterialTable{}, strict, pd);
  const SimState init = a.initial_condition(default_circles(), 2.0 / 16.0);
  const SimState sa = a.staggered_step(init).state;
  const SimState sb = b.staggered_step(init).state;
  EXPECT_LE(verify::max_field_difference(sa, sb), 10.0 * loose.stagger_tol);
}

TEST(Staggered, MatchesMonolithicOracle) {
  for (Index n : {4, 8}) {
    const verify::CheckResult r = verify::check_monolithic(n, ScenarioKind::PressureDrop, 42);
    EXPECT_LE(r.value, 1e-8) << n;
  }
  EXPECT_LE(verify::check_monolithic(4, ScenarioKind::ZeroPressure, 3).value, 1e-8);
}

TEST(Staggered, ContentIdentityAfterStep) {
  const StructuredGrid g(8, 8);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::PressureDrop));
  const SimState s = problem.staggered_step(problem.initial_condition(default_circles(), 0.1)).state;
  const Vector theta = cell_content(g, problem.material(), s.phi, s.u, s.p);
  EXPECT_LE((theta - s.theta).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_DOUBLE_EQ(s.time, 1e-3);
}

TEST(Staggered, ReportsIncrementHistory) {
  const StructuredGrid g(8, 8);
  CouplingConfig cfg;
  cfg.stagger_max = 1;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  try {
    problem.staggered_step(problem.initial_condition(default_circles(), 0.1));
    FAIL() << "expected StaggerError";
  } catch (const StaggerError& e) {
    EXPECT_EQ(e.history().size(), 1u);
  }
}

TEST(Simulation, ZeroEndTime) {
  const StructuredGrid g(6, 6);
  CouplingConfig cfg;
  cfg.t_end = 0.0;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const SimState init = problem.initial_condition(default_circles(), 0.1);
  const SimulationResult r = run_simulation(problem, init);
  ASSERT_EQ(r.energies.size(), 1u);
  EXPECT_EQ(r.final_state.phi, init.phi);
  EXPECT_TRUE(r.sweeps.empty());
}

TEST(Simulation, CahnLarcheHasNoFluidEnergy) {
  const StructuredGrid g(8, 8);
  CouplingConfig cfg;
  cfg.t_end = 0.005;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::CahnLarche));
  const SimulationResult r = run_simulation(problem, problem.initial_condition(default_circles(), 0.1));
  ASSERT_EQ(r.energies.size(), 6u);
  for (const EnergyReport& e : r.energies) {
    EXPECT_EQ(e.e_fluid, 0.0);
    EXPECT_EQ(e.boundary_term, 0.0);
  }
  EXPECT_EQ(r.final_state.p.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(Simulation, SnapshotScheduleAndDeterminism) {
  const StructuredGrid g(8, 8);
  CouplingConfig cfg;
  cfg.t_end = 0.007;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const SimState init = problem.initial_condition(default_circles(), 0.1);
  std::vector<Index> steps;
  SimulationObserver obs;
  obs.snapshot_interval = 3;
  obs.on_snapshot = [&](const SimState&, Index step) { steps.push_back(step); };
  const SimulationResult a = run_simulation(problem, init, obs);
  EXPECT_EQ(steps, (std::vector<Index>{0, 3, 6, 7}));
  const CoupledProblem again(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const SimulationResult b = run_simulation(again, init);
  EXPECT_EQ(a.energies, b.energies);
  EXPECT_EQ(a.final_state.phi, b.final_state.phi);
}

TEST(Simulation, EnergyPlusBoundaryWorkDecreases) {
  const StructuredGrid g(12, 12);
  CouplingConfig cfg;
  cfg.t_end = 0.01;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const SimulationResult r = run_simulation(problem, problem.initial_condition(default_circles(), 0.1));
  for (std::size_t i = 1; i < r.energies.size(); ++i) {
    const auto lyap = [](const EnergyReport& e) {
      return e.e_chemical + e.e_elastic + e.e_fluid + e.boundary_work_accumulated;
    };
    EXPECT_LE(lyap(r.energies[i]), lyap(r.energies[i - 1]) + 1e-8) << i;
  }
}

TEST(Simulation, FailureCarriesTime) {
  const StructuredGrid g(8, 8);
  CouplingConfig cfg;
  cfg.stagger_max = 1;
  cfg.t_end = 0.01;
  const CoupledProblem problem(g, MaterialTable{}, cfg, Scenario::make(ScenarioKind::PressureDrop));
  try {
    run_simulation(problem, problem.initial_condition(default_circles(), 0.1));
    FAIL() << "expected SimulationError";
  } catch (const SimulationError& e) {
    EXPECT_DOUBLE_EQ(e.time(), 1e-3);
  }
}

TEST(InitialCondition, SaturationAndCenters) {
  const Index n = 64;
  const StructuredGrid g(n, n);
  const double w = 2.0 / 64.0;
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::PressureDrop));
  const SimState s = problem.initial_condition(default_circles(), w);
  // tanh(-7) = -1 + 2e^-14 / (1 + e^-14).
  const double saturation = 2.0 * std::exp(-14.0);
  const Index corner = g.node_index(0, 0);  // distance to nearest circle >= 7w
  EXPECT_LE(s.phi[corner] + 1.0, saturation);
  EXPECT_LT(saturation, 1.7e-6);
  // Node (19, 19) lies 0.003 sqrt(2) from the centre (0.3, 0.3).
  const Index inside = g.node_index(19, 19);
  const Point x = g.node_position(inside);
  const double d = 0.15 - std::hypot(x.x - 0.3, x.y - 0.3);
  EXPECT_NEAR(s.phi[inside], std::tanh(d / w), 1e-15);
  EXPECT_GT(s.phi[inside], 0.9998);
  EXPECT_LE(s.phi.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_EQ(s.u.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(s.p.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(s.q.lpNorm<Eigen::Infinity>(), 0.0);
}

TEST(InitialCondition, MassMatchesTrapezoidOracle) {
  const Index n = 33;
  const StructuredGrid g(n, n);
  const double w = 2.0 / 33.0;
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::PressureDrop));
  const SimState s = problem.initial_condition(default_circles(), w);
  // The Q1 interpolant integrates exactly by the tensor trapezoid rule.
  const double h = 1.0 / static_cast<double>(n);
  double oracle = 0.0;
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) * h;
      const double y = static_cast<double>(j) * h;
      double d = -1e300;
      for (double cx : {0.3, 0.7})
        for (double cy : {0.3, 0.7}) d = std::max(d, 0.15 - std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy)));
      const double wx = (i == 0 || i == n) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == n) ? 0.5 : 1.0;
      oracle += wx * wy * h * h * std::tanh(d / w);
    }
  }
  EXPECT_NEAR(phase_mass(g, s.phi), oracle, 1e-10);
}

TEST(InitialCondition, ChemicalPotentialIsConsistent) {
  const StructuredGrid g(10, 10);
  const MaterialTable mat;
  const CoupledProblem problem(g, mat, CouplingConfig{}, Scenario::make(ScenarioKind::PressureDrop));
  const SimState s = problem.initial_condition(default_circles(), 0.1);
  const Vector lhs = assemble_q1_mass(g, QuadratureField(g, 1.0)) * s.mu;
  const Vector rhs = chemical_potential_load(g, mat, s.phi, nullptr, s.u, s.p);
  EXPECT_LE((lhs - rhs).lpNorm<Eigen::Infinity>(), 1e-12 * rhs.lpNorm<Eigen::Infinity>());
  EXPECT_LE((cell_content(g, mat, s.phi, s.u, s.p) - s.theta).lpNorm<Eigen::Infinity>(), 1e-15);
}

TEST(InitialCondition, RejectsCirclesOutsideDomain) {
  const StructuredGrid g(6, 6);
  const CoupledProblem problem(g, MaterialTable{}, CouplingConfig{},
                               Scenario::make(ScenarioKind::PressureDrop));
  const std::vector<Circle> bad = {{{0.95, 0.5}, 0.1}};
  EXPECT_THROW(problem.initial_condition(bad, 0.1), std::invalid_argument);
  const std::vector<Circle> overlapping = {{{0.4, 0.5}, 0.2}, {{0.6, 0.5}, 0.2}};
  EXPECT_NO_THROW(problem.initial_condition(overlapping, 0.1));
}

TEST(Coupling, ValidationNamesField) {
  CouplingConfig c;
  c.tau = 0.0;
  try {
    c.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("tau"), std::string::npos);
  }
}
