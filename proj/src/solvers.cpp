#include "chb/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace chb {

namespace {

using Triplet = Eigen::Triplet<double>;

void append(std::vector<Triplet>& t, const SparseMatrix& a, Index row0, Index col0, double scale) {
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      t.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

SparseMatrix block2x2(const SparseMatrix& a, const SparseMatrix& b, const SparseMatrix& c,
                      const SparseMatrix& d) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros() + b.nonZeros() + c.nonZeros() + d.nonZeros()));
  append(t, a, 0, 0, 1.0);
  append(t, b, 0, a.cols(), 1.0);
  append(t, c, a.rows(), 0, 1.0);
  append(t, d, a.rows(), a.cols(), 1.0);
  SparseMatrix m(a.rows() + c.rows(), a.cols() + b.cols());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrix diagonal(const Vector& v) {
  SparseMatrix d(v.size(), v.size());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) t.emplace_back(i, i, v[i]);
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

}  // namespace

void CouplingConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
      throw std::invalid_argument(std::string(name) + " must be positive and finite");
  };
  positive(stagger_tol, "stagger_tol");
  positive(newton_tol, "newton_tol");
  positive(tau, "tau");
  if (!std::isfinite(t_end) || t_end < 0.0) throw std::invalid_argument("t_end must be >= 0");
  if (stagger_max < 1) throw std::invalid_argument("stagger_max must be >= 1");
  if (newton_max < 1) throw std::invalid_argument("newton_max must be >= 1");
}

std::vector<Circle> default_circles() {
  return {{{0.3, 0.3}, 0.15}, {{0.7, 0.3}, 0.15}, {{0.3, 0.7}, 0.15}, {{0.7, 0.7}, 0.15}};
}

double relative_increment(const Vector& next, const Vector& prev) {
  return (next - prev).norm() / std::max(next.norm(), 1e-12);
}

CoupledProblem::CoupledProblem(const StructuredGrid& grid, const MaterialTable& material,
                               const CouplingConfig& coupling, const Scenario& scenario,
                               const Sources& sources)
    : grid_(grid), material_(material), coupling_(coupling), scenario_(scenario), sources_(sources) {
  material_.validate();
  coupling_.validate();
  mass_ = assemble_q1_mass(grid_, QuadratureField(grid_, 1.0));
  laplace_ = assemble_q1_stiffness(grid_, QuadratureField(grid_, 1.0));
  divergence_ = assemble_divergence(grid_);
  lumped_mass_ = mass_ * Vector::Ones(grid_.num_nodes());

  for (Index n = 0; n < grid_.num_nodes(); ++n) {
    if (grid_.node_side(n) != BoundarySide::Interior) {
      boundary_vector_dofs_.push_back(vector_dof(n, 0));
      boundary_vector_dofs_.push_back(vector_dof(n, 1));
    }
  }
  for (Index e = 0; e < grid_.num_edges(); ++e) {
    const BoundarySide side = grid_.edge_side(e);
    if (side == BoundarySide::Left || side == BoundarySide::Right) noflow_edges_.push_back(e);
  }
}

Vector CoupledProblem::nodal_reaction() const {
  return mass_ * Vector::Constant(grid_.num_nodes(), sources_.reaction);
}

SimState CoupledProblem::initial_condition(std::span<const Circle> circles, double width) const {
  if (!(width > 0.0)) throw std::invalid_argument("initial_condition: width must be positive");
  for (const Circle& c : circles) {
    if (!(c.radius > 0.0) || c.center.x - c.radius < 0.0 || c.center.x + c.radius > 1.0 ||
        c.center.y - c.radius < 0.0 || c.center.y + c.radius > 1.0) {
      std::ostringstream os;
      os << "initial_condition: circle at (" << c.center.x << ", " << c.center.y << ") radius "
         << c.radius << " does not lie inside the unit square";
      throw std::invalid_argument(os.str());
    }
  }
  SimState s = zero_state(grid_);
  for (Index n = 0; n < grid_.num_nodes(); ++n) {
    const Point x = grid_.node_position(n);
    double d = -1.0e300;
    for (const Circle& c : circles)
      d = std::max(d, c.radius - std::hypot(x.x - c.center.x, x.y - c.center.y));
    s.phi[n] = circles.empty() ? -1.0 : std::tanh(d / width);
  }
  const Vector load = chemical_potential_load(grid_, material_, s.phi, nullptr, s.u, s.p);
  s.mu = solve_sparse(mass_, load, SolverHint::SPD);
  s.theta = cell_content(grid_, material_, s.phi, s.u, s.p);
  return s;
}

ChResult CoupledProblem::solve_ch(const SimState& old, const SimState& iter) const {
  const Index n = grid_.num_nodes();
  const double tau = coupling_.tau;
  const MaterialTable& mat = material_;

  const QuadratureField phi_old_q = evaluate_q1(grid_, old.phi);
  std::vector<VoigtVector> strain(static_cast<std::size_t>(grid_.num_cells() * kQuadPerCell));
  std::vector<double> divu(strain.size());
  for (Index c = 0; c < grid_.num_cells(); ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const auto k = static_cast<std::size_t>(c * kQuadPerCell + q);
      strain[k] = strain_at(grid_, iter.u, c, q);
      divu[k] = strain[k][0] + strain[k][1];
    }
  }
  // With flow enabled the fluid content is frozen instead of the pressure, so
  // p = p(phi) responds inside the Newton solve. Freezing p diverges once a
  // high-pressure region starts to change phase.
  const bool frozen_content = scenario_.flow_enabled();
  Vector pressure = iter.p;
  // Per cell: 1 / sum_q w / M and a_i = sum_q w N_i dg/dp for the rank-one
  // Jacobian term (1 / S) a a^T coming from dp/dphi.
  Vector inv_compliance = Vector::Zero(grid_.num_cells());
  std::vector<std::array<double, 4>> dp_load(static_cast<std::size_t>(grid_.num_cells()));

  const SparseMatrix mobility_laplace = mat.mobility * laplace_;
  const SparseMatrix gamma_laplace = mat.gamma * laplace_;
  const SparseMatrix tau_mobility_laplace = tau * mobility_laplace;
  const Vector reaction = nodal_reaction();
  const Vector old_mass = mass_ * old.phi;

  Vector phi = iter.phi;
  Vector mu = iter.mu;
  QuadratureField density(grid_);
  QuadratureField jacobian(grid_);

  auto evaluate = [&](bool with_jacobian) {
    const QuadratureField phi_q = evaluate_q1(grid_, phi);
    for (Index c = 0; c < grid_.num_cells(); ++c) {
      const auto qp = grid_.quadrature(c);
      if (frozen_content) {
        double compliance = 0.0;
        double coupling = 0.0;
        for (int q = 0; q < kQuadPerCell; ++q) {
          const double ph = phi_q(c, q);
          compliance += qp[q].weight / coeff(mat, ph, Coefficient::M);
          coupling += qp[q].weight * coeff(mat, ph, Coefficient::Alpha) *
                      divu[static_cast<std::size_t>(c * kQuadPerCell + q)];
        }
        pressure[c] = (grid_.cell_area() * iter.theta[c] - coupling) / compliance;
        inv_compliance[c] = 1.0 / compliance;
        dp_load[static_cast<std::size_t>(c)] = {0.0, 0.0, 0.0, 0.0};
      }
      for (int q = 0; q < kQuadPerCell; ++q) {
        const auto k = static_cast<std::size_t>(c * kQuadPerCell + q);
        const double ph = phi_q(c, q);
        density(c, q) = psi_prime_split(ph, phi_old_q(c, q)) +
                        dphi_elastic_energy_density(mat, ph, strain[k]) +
                        dphi_fluid_energy_density(mat, ph, divu[k], pressure[c]);
        if (with_jacobian) {
          jacobian(c, q) = psi_prime_split_jacobian(ph) +
                           d2phi_elastic_energy_density(mat, ph, strain[k]) +
                           d2phi_fluid_energy_density(mat, ph, divu[k], pressure[c]);
          if (frozen_content) {
            const double m = coeff(mat, ph, Coefficient::M);
            const double dg_dp = coeff_prime(mat, ph, Coefficient::M) / (m * m) * pressure[c] -
                                 coeff_prime(mat, ph, Coefficient::Alpha) * divu[k];
            const auto shape = q1_values(qp[q].s, qp[q].t);
            for (int i = 0; i < 4; ++i) dp_load[static_cast<std::size_t>(c)][i] += qp[q].weight * shape[i] * dg_dp;
          }
        }
      }
    }
    Vector r(2 * n);
    r.head(n) = (mass_ * phi - old_mass) / tau + mobility_laplace * mu - reaction;
    r.tail(n) = mass_ * mu - gamma_laplace * phi - assemble_q1_load(grid_, density);
    return r;
  };

  auto scaled_norm = [&](const Vector& r) {
    double worst = 0.0;
    for (Index i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(r[i]) * tau / lumped_mass_[i]);
      worst = std::max(worst, std::abs(r[n + i]) / lumped_mass_[i]);
    }
    return worst;
  };

  ChResult result;
  for (int it = 0; it <= coupling_.newton_max; ++it) {
    const bool last = it == coupling_.newton_max;
    Vector r = evaluate(!last);
    result.residual = scaled_norm(r);
    if (!std::isfinite(result.residual)) {
      throw NewtonError("Cahn-Hilliard Newton: non-finite residual", result.residual);
    }
    if (result.residual <= coupling_.newton_tol) {
      result.phi = std::move(phi);
      result.mu = std::move(mu);
      result.iterations = it;
      return result;
    }
    if (last) break;
    // Symmetric form: rows (mu-equation, tau * phi-equation).
    SparseMatrix upper_left = -gamma_laplace - assemble_q1_mass(grid_, jacobian);
    if (frozen_content) {
      std::vector<Triplet> t;
      t.reserve(static_cast<std::size_t>(16 * grid_.num_cells()));
      for (Index c = 0; c < grid_.num_cells(); ++c) {
        const auto nodes = grid_.cell_nodes(c);
        const auto& a = dp_load[static_cast<std::size_t>(c)];
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) t.emplace_back(nodes[i], nodes[j], -inv_compliance[c] * a[i] * a[j]);
      }
      SparseMatrix rank_one(n, n);
      rank_one.setFromTriplets(t.begin(), t.end());
      upper_left += rank_one;
    }
    const SparseMatrix jac = block2x2(upper_left, mass_, mass_, tau_mobility_laplace);
    Vector rhs(2 * n);
    rhs.head(n) = -r.tail(n);
    rhs.tail(n) = -tau * r.head(n);
    Vector delta;
    try {
      delta = ch_solver_.solve_updated(jac, rhs);
    } catch (const SolverError& e) {
      throw NewtonError(std::string("Cahn-Hilliard Newton: singular Jacobian: ") + e.what(),
                        result.residual);
    }
    phi += delta.head(n);
    mu += delta.tail(n);
  }
  std::ostringstream os;
  os << "Cahn-Hilliard Newton did not converge in " << coupling_.newton_max
     << " iterations (residual " << result.residual << ")";
  throw NewtonError(os.str(), result.residual);
}

Vector CoupledProblem::solve_elasticity(const SimState& iter) const {
  const MaterialTable& mat = material_;
  const QuadratureField phi_q = evaluate_q1(grid_, iter.phi);
  VoigtField c_field(static_cast<std::size_t>(grid_.num_cells() * kQuadPerCell));
  std::vector<VoigtVector> eigen_stress(c_field.size());
  QuadratureField alpha(grid_);
  for (Index c = 0; c < grid_.num_cells(); ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const auto k = static_cast<std::size_t>(c * kQuadPerCell + q);
      const double ph = phi_q(c, q);
      c_field[k] = stiffness(mat, ph);
      eigen_stress[k] = c_field[k] * VoigtVector(mat.xi * ph, mat.xi * ph, 0.0);
      alpha(c, q) = coeff(mat, ph, Coefficient::Alpha);
    }
  }
  SparseMatrix a = assemble_elastic_stiffness(grid_, c_field);
  Vector rhs = assemble_vector_q1_stress_load(grid_, eigen_stress);
  if (scenario_.flow_enabled()) {
    rhs += assemble_divu_p0_coupling(grid_, alpha).transpose() * iter.p;
  }
  if (sources_.body_force.x != 0.0 || sources_.body_force.y != 0.0) {
    const Vector fx = assemble_q1_load(grid_, QuadratureField(grid_, sources_.body_force.x));
    const Vector fy = assemble_q1_load(grid_, QuadratureField(grid_, sources_.body_force.y));
    for (Index nd = 0; nd < grid_.num_nodes(); ++nd) {
      rhs[vector_dof(nd, 0)] += fx[nd];
      rhs[vector_dof(nd, 1)] += fy[nd];
    }
  }
  const std::vector<double> zeros(boundary_vector_dofs_.size(), 0.0);
  apply_dirichlet(a, rhs, boundary_vector_dofs_, zeros);
  return elastic_solver_.solve_updated(a, rhs);
}

Vector CoupledProblem::elasticity_residual(const SimState& s) const {
  const Vector p = scenario_.flow_enabled() ? s.p : Vector::Zero(grid_.num_cells());
  Vector r = elastic_gradient(grid_, material_, s.phi, s.u, p);
  const Vector fx = assemble_q1_load(grid_, QuadratureField(grid_, sources_.body_force.x));
  const Vector fy = assemble_q1_load(grid_, QuadratureField(grid_, sources_.body_force.y));
  for (Index nd = 0; nd < grid_.num_nodes(); ++nd) {
    r[vector_dof(nd, 0)] -= fx[nd];
    r[vector_dof(nd, 1)] -= fy[nd];
  }
  for (Index d : boundary_vector_dofs_) r[d] = 0.0;
  return r;
}

FlowResult CoupledProblem::solve_flow(const SimState& old, const SimState& iter) const {
  if (!scenario_.flow_enabled()) {
    throw std::logic_error("solve_flow: the flow subsystem is disabled in the CahnLarche scenario");
  }
  const MaterialTable& mat = material_;
  const double tau = coupling_.tau;
  const double area = grid_.cell_area();
  const Index ne = grid_.num_edges();
  const Index nc = grid_.num_cells();

  const QuadratureField phi_q = evaluate_q1(grid_, iter.phi);
  QuadratureField inv_perm(grid_);
  Vector compliance = Vector::Zero(nc);
  Vector coupling = Vector::Zero(nc);
  const double w = 0.25 * area;
  for (Index c = 0; c < nc; ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const double ph = phi_q(c, q);
      inv_perm(c, q) = 1.0 / coeff(mat, ph, Coefficient::Kappa);
      compliance[c] += w / coeff(mat, ph, Coefficient::M);
      coupling[c] += w * coeff(mat, ph, Coefficient::Alpha) * divergence_at(grid_, iter.u, c, q);
    }
  }

  const SparseMatrix a = assemble_rt0_mass(grid_, inv_perm);
  const SparseMatrix bt = -SparseMatrix(divergence_.transpose());
  SparseMatrix system = block2x2(a, bt, -divergence_, diagonal(-compliance / tau));

  Vector rhs = Vector::Zero(ne + nc);
  // Natural pressure data: -\int_{Gamma_D} p_D v.n, top outward normal = +y.
  for (Index i = 0; i < grid_.nx(); ++i) {
    rhs[grid_.horizontal_edge_index(i, grid_.ny())] = -scenario_.p_top * grid_.hx();
  }
  for (Index c = 0; c < nc; ++c) {
    rhs[ne + c] = -(area * sources_.fluid_source + (area * old.theta[c] - coupling[c]) / tau);
  }
  const std::vector<double> zeros(noflow_edges_.size(), 0.0);
  apply_dirichlet(system, rhs, noflow_edges_, zeros);

  const Vector x = flow_solver_.solve_updated(system, rhs);

  FlowResult r;
  r.q = x.head(ne);
  r.p = x.tail(nc);
  r.theta = (compliance.cwiseProduct(r.p) + coupling) / area;
  return r;
}

StepResult CoupledProblem::staggered_step(const SimState& old) const {
  StepResult result;
  SimState iter = old;
  iter.time = old.time + coupling_.tau;
  for (int sweep = 1; sweep <= coupling_.stagger_max; ++sweep) {
    const SimState prev = iter;
    ChResult ch = solve_ch(old, iter);
    iter.phi = std::move(ch.phi);
    iter.mu = std::move(ch.mu);
    iter.u = solve_elasticity(iter);
    if (scenario_.flow_enabled()) {
      FlowResult fl = solve_flow(old, iter);
      iter.p = std::move(fl.p);
      iter.q = std::move(fl.q);
      iter.theta = std::move(fl.theta);
    } else {
      iter.p.setZero();
      iter.q.setZero();
      iter.theta = cell_content(grid_, material_, iter.phi, iter.u, iter.p);
    }
    const double inc = std::max({relative_increment(iter.phi, prev.phi),
                                 relative_increment(iter.mu, prev.mu),
                                 relative_increment(iter.u, prev.u),
                                 relative_increment(iter.p, prev.p),
                                 relative_increment(iter.q, prev.q)});
    result.increments.push_back(inc);
    if (inc <= coupling_.stagger_tol) {
      result.state = std::move(iter);
      result.sweeps = sweep;
      return result;
    }
  }
  std::ostringstream os;
  os << "staggered iteration did not converge in " << coupling_.stagger_max
     << " sweeps (last increment " << result.increments.back() << ")";
  throw StaggerError(os.str(), result.increments);
}

SimulationResult run_simulation(const CoupledProblem& problem, const SimState& initial,
                                const SimulationObserver& observer) {
  const CouplingConfig& cfg = problem.coupling();
  const auto steps = static_cast<Index>(std::llround(cfg.t_end / cfg.tau));
  const Index interval = std::max<Index>(observer.snapshot_interval, 1);

  SimulationResult result;
  double work = 0.0;
  auto report = [&](const SimState& s) {
    EnergyReport r = energy_total(problem.grid(), problem.material(), s, problem.scenario(), work);
    result.energies.push_back(r);
    if (observer.on_energy) observer.on_energy(r);
  };

  SimState state = initial;
  report(state);
  if (observer.on_snapshot) observer.on_snapshot(state, 0);
  for (Index step = 1; step <= steps; ++step) {
    StepResult sr;
    try {
      sr = problem.staggered_step(state);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "time step " << step << " (t = " << state.time + cfg.tau << ") failed: " << e.what();
      throw SimulationError(os.str(), state.time + cfg.tau);
    }
    state = std::move(sr.state);
    state.time = static_cast<double>(step) * cfg.tau;
    result.sweeps.push_back(sr.sweeps);
    work -= cfg.tau * boundary_term(problem.grid(), problem.scenario(), state.q);
    report(state);
    if (observer.on_snapshot && (step % interval == 0 || step == steps)) {
      observer.on_snapshot(state, step);
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace chb
