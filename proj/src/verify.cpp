#include "chb/verify.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace chb::verify {

namespace {

struct Layout {
  Index nodes = 0;
  Index edges = 0;
  Index cells = 0;
  bool flow = false;

  Index phi() const { return 0; }
  Index mu() const { return nodes; }
  Index u() const { return 2 * nodes; }
  Index q() const { return 4 * nodes; }
  Index p() const { return 4 * nodes + edges; }
  Index size() const { return flow ? 4 * nodes + edges + cells : 4 * nodes; }
};

Layout layout_of(const CoupledProblem& problem) {
  const StructuredGrid& g = problem.grid();
  return {g.num_nodes(), g.num_edges(), g.num_cells(), problem.scenario().flow_enabled()};
}

Vector pack(const Layout& l, const SimState& s) {
  Vector z(l.size());
  z.segment(l.phi(), l.nodes) = s.phi;
  z.segment(l.mu(), l.nodes) = s.mu;
  z.segment(l.u(), 2 * l.nodes) = s.u;
  if (l.flow) {
    z.segment(l.q(), l.edges) = s.q;
    z.segment(l.p(), l.cells) = s.p;
  }
  return z;
}

SimState unpack(const Layout& l, const CoupledProblem& problem, const Vector& z, double time) {
  SimState s = zero_state(problem.grid());
  s.phi = z.segment(l.phi(), l.nodes);
  s.mu = z.segment(l.mu(), l.nodes);
  s.u = z.segment(l.u(), 2 * l.nodes);
  if (l.flow) {
    s.q = z.segment(l.q(), l.edges);
    s.p = z.segment(l.p(), l.cells);
  }
  s.theta = cell_content(problem.grid(), problem.material(), s.phi, s.u, s.p);
  s.time = time;
  return s;
}

double rel_l2(const Vector& a, const Vector& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / scale;
}

}  // namespace

Vector monolithic_residual(const CoupledProblem& problem, const SimState& old, const SimState& s) {
  const StructuredGrid& grid = problem.grid();
  const MaterialTable& mat = problem.material();
  const double tau = problem.coupling().tau;
  const Sources& src = problem.sources();
  const Layout l = layout_of(problem);
  const double area = grid.cell_area();

  const SparseMatrix mass = assemble_q1_mass(grid, QuadratureField(grid, 1.0));
  const SparseMatrix mob = assemble_q1_stiffness(grid, QuadratureField(grid, mat.mobility));
  const Vector lumped = mass * Vector::Ones(l.nodes);

  Vector r = Vector::Zero(l.size());
  const Vector p = l.flow ? s.p : Vector::Zero(l.cells);

  // Phase-field balance and chemical potential.
  const Vector r_phi = mass * (s.phi - old.phi) / tau + mob * s.mu -
                       mass * Vector::Constant(l.nodes, src.reaction);
  const Vector r_mu = mass * s.mu - chemical_potential_load(grid, mat, s.phi, &old.phi, s.u, p);
  r.segment(l.phi(), l.nodes) = (r_phi * tau).cwiseQuotient(lumped);
  r.segment(l.mu(), l.nodes) = r_mu.cwiseQuotient(lumped);

  // Momentum balance with zero displacement on the whole boundary.
  Vector r_u = elastic_gradient(grid, mat, s.phi, s.u, p);
  const Vector fx = assemble_q1_load(grid, QuadratureField(grid, src.body_force.x));
  const Vector fy = assemble_q1_load(grid, QuadratureField(grid, src.body_force.y));
  for (Index n = 0; n < l.nodes; ++n) {
    r_u[vector_dof(n, 0)] -= fx[n];
    r_u[vector_dof(n, 1)] -= fy[n];
  }
  r_u /= area;
  for (Index n = 0; n < l.nodes; ++n) {
    if (grid.node_side(n) != BoundarySide::Interior) {
      r_u[vector_dof(n, 0)] = s.u[vector_dof(n, 0)];
      r_u[vector_dof(n, 1)] = s.u[vector_dof(n, 1)];
    }
  }
  r.segment(l.u(), 2 * l.nodes) = r_u;

  if (l.flow) {
    const QuadratureField phi_q = evaluate_q1(grid, s.phi);
    QuadratureField inv_perm(grid);
    for (Index c = 0; c < l.cells; ++c)
      for (int q = 0; q < kQuadPerCell; ++q)
        inv_perm(c, q) = 1.0 / coeff(mat, phi_q(c, q), Coefficient::Kappa);
    const SparseMatrix b = assemble_divergence(grid);
    Vector r_q = assemble_rt0_mass(grid, inv_perm) * s.q - b.transpose() * s.p;
    for (Index i = 0; i < grid.nx(); ++i)
      r_q[grid.horizontal_edge_index(i, grid.ny())] += problem.scenario().p_top * grid.hx();
    r_q /= grid.hx();
    for (Index e = 0; e < l.edges; ++e) {
      const BoundarySide side = grid.edge_side(e);
      if (side == BoundarySide::Left || side == BoundarySide::Right) r_q[e] = s.q[e];
    }
    r.segment(l.q(), l.edges) = r_q;

    const Vector theta = cell_content(grid, mat, s.phi, s.u, s.p);
    const Vector r_p = (theta - old.theta) + tau * (b * s.q) / area -
                       Vector::Constant(l.cells, tau * src.fluid_source);
    r.segment(l.p(), l.cells) = r_p;
  }
  return r;
}

MonolithicResult monolithic_step(const CoupledProblem& problem, const SimState& old, double tol,
                                 int max_iterations) {
  const Layout l = layout_of(problem);
  const double time = old.time + problem.coupling().tau;
  Vector z = pack(l, old);

  MonolithicResult result;
  auto residual = [&](const Vector& x) {
    return monolithic_residual(problem, old, unpack(l, problem, x, time));
  };

  Vector r = residual(z);
  for (int it = 0; it < max_iterations; ++it) {
    result.residual = r.lpNorm<Eigen::Infinity>();
    result.iterations = it;
    if (result.residual <= tol) break;
    Eigen::MatrixXd jac(l.size(), l.size());
    for (Index j = 0; j < l.size(); ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[j]));
      Vector zp = z;
      Vector zm = z;
      zp[j] += h;
      zm[j] -= h;
      jac.col(j) = (residual(zp) - residual(zm)) / (2.0 * h);
    }
    const Vector dz = jac.partialPivLu().solve(-r);
    z += dz;
    r = residual(z);
    if (dz.lpNorm<Eigen::Infinity>() < 1e-15) {
      result.residual = r.lpNorm<Eigen::Infinity>();
      result.iterations = it + 1;
      break;
    }
  }
  result.residual = r.lpNorm<Eigen::Infinity>();
  result.state = unpack(l, problem, z, time);
  return result;
}

double max_field_difference(const SimState& a, const SimState& b) {
  return std::max({rel_l2(a.phi, b.phi), rel_l2(a.mu, b.mu), rel_l2(a.u, b.u), rel_l2(a.p, b.p),
                   rel_l2(a.q, b.q)});
}

CheckResult check_gradient(const StructuredGrid& grid, const MaterialTable& mat,
                           GradientDirection direction, std::uint64_t seed) {
  const SimState state = random_smooth_state(grid, mat, seed);
  const GradientCheckResult r = gradient_check(grid, mat, direction, state, seed + 1);
  const char* name = direction == GradientDirection::Phi ? "gradient phi"
                     : direction == GradientDirection::U ? "gradient u"
                                                         : "gradient theta";
  const double tol = direction == GradientDirection::Phi ? 1e-5 : 1e-7;
  return {name, r.max_relative_error, tol, r.max_relative_error <= tol};
}

CheckResult check_monolithic(Index n, ScenarioKind kind, std::uint64_t seed) {
  const StructuredGrid grid(n, n);
  const MaterialTable mat;
  CouplingConfig cfg;
  cfg.stagger_tol = 1e-12;
  cfg.newton_tol = 1e-12;
  cfg.stagger_max = 400;
  const CoupledProblem problem(grid, mat, cfg, Scenario::make(kind));

  SimState old = random_smooth_state(grid, mat, seed);
  for (Index nd = 0; nd < grid.num_nodes(); ++nd) {
    if (grid.node_side(nd) != BoundarySide::Interior) {
      old.u[vector_dof(nd, 0)] = 0.0;
      old.u[vector_dof(nd, 1)] = 0.0;
    }
  }
  if (!problem.scenario().flow_enabled()) old.p.setZero();
  old.theta = cell_content(grid, mat, old.phi, old.u, old.p);

  const StepResult staggered = problem.staggered_step(old);
  const MonolithicResult mono = monolithic_step(problem, old);
  const double diff = max_field_difference(staggered.state, mono.state);
  return {"monolithic " + std::to_string(n) + "x" + std::to_string(n) + " " +
              std::string(to_string(kind)),
          diff, 1e-8, diff <= 1e-8 && mono.residual <= 1e-11};
}

CheckResult check_flow_exactness(Index n) {
  const StructuredGrid grid(n, n);
  const MaterialTable mat;
  CouplingConfig cfg;
  cfg.tau = 1e30;
  const Scenario scenario = Scenario::make(ScenarioKind::PressureDrop);
  const CoupledProblem problem(grid, mat, cfg, scenario);

  SimState s = zero_state(grid);
  const double phi0 = 0.3;
  s.phi.setConstant(phi0);
  const FlowResult r = problem.solve_flow(s, s);
  const double expected = -coeff(mat, phi0, Coefficient::Kappa) * scenario.p_top;
  double err = 0.0;
  for (Index e = 0; e < grid.num_edges(); ++e) {
    const double target = grid.edge_direction(e) == EdgeDirection::Horizontal ? expected : 0.0;
    err = std::max(err, std::abs(r.q[e] - target));
  }
  return {"flow exactness", err, 1e-12, err <= 1e-12};
}

CheckResult check_patch_test(Index nx, Index ny) {
  const StructuredGrid grid(nx, ny);
  const MaterialTable mat;
  const VoigtField c(static_cast<std::size_t>(grid.num_cells() * kQuadPerCell), mat.C_minus);
  SparseMatrix a = assemble_elastic_stiffness(grid, c);
  Vector rhs = Vector::Zero(2 * grid.num_nodes());
  std::vector<Index> dofs;
  std::vector<double> values;
  for (Index n = 0; n < grid.num_nodes(); ++n) {
    if (grid.node_side(n) == BoundarySide::Interior) continue;
    const Point x = grid.node_position(n);
    dofs.push_back(vector_dof(n, 0));
    values.push_back(x.x);
    dofs.push_back(vector_dof(n, 1));
    values.push_back(0.0);
  }
  apply_dirichlet(a, rhs, dofs, values);
  const Vector u = solve_sparse(a, rhs, SolverHint::SPD);
  double err = 0.0;
  for (Index n = 0; n < grid.num_nodes(); ++n) {
    const Point x = grid.node_position(n);
    err = std::max({err, std::abs(u[vector_dof(n, 0)] - x.x), std::abs(u[vector_dof(n, 1)])});
  }
  return {"elasticity patch test", err, 1e-12, err <= 1e-12};
}

CheckResult check_mass_conservation(Index n, int steps) {
  const StructuredGrid grid(n, n);
  const MaterialTable mat;
  CouplingConfig cfg;
  cfg.t_end = steps * cfg.tau;
  const CoupledProblem problem(grid, mat, cfg, Scenario::make(ScenarioKind::PressureDrop));
  const auto circles = default_circles();
  const SimState init = problem.initial_condition(circles, 2.0 * grid.hx());
  const SparseMatrix mass = assemble_q1_mass(grid, QuadratureField(grid, 1.0));
  const double m0 = Vector::Ones(grid.num_nodes()).dot(mass * init.phi);
  const SimulationResult run = run_simulation(problem, init);
  const double m1 = Vector::Ones(grid.num_nodes()).dot(mass * run.final_state.phi);
  const double drift = std::abs(m1 - m0) / std::abs(m0);
  return {"mass conservation", drift, 1e-10, drift < 1e-10};
}

std::vector<CheckResult> run_all(Index n, std::uint64_t seed) {
  const StructuredGrid grid(n, n);
  const MaterialTable mat;
  std::vector<CheckResult> out;
  out.push_back(check_gradient(grid, mat, GradientDirection::Phi, seed));
  out.push_back(check_gradient(grid, mat, GradientDirection::U, seed));
  out.push_back(check_gradient(grid, mat, GradientDirection::Theta, seed));
  out.push_back(check_monolithic(4, ScenarioKind::PressureDrop, seed));
  out.push_back(check_monolithic(n, ScenarioKind::PressureDrop, seed));
  out.push_back(check_monolithic(4, ScenarioKind::CahnLarche, seed));
  out.push_back(check_flow_exactness(n));
  out.push_back(check_patch_test(n, n));
  out.push_back(check_mass_conservation(n, 10));
  return out;
}

}  // namespace chb::verify
