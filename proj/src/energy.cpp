#include "chb/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace chb {

namespace {

const VoigtVector kIdentity{1.0, 1.0, 0.0};

std::size_t qi(Index cell, int q) { return static_cast<std::size_t>(cell * kQuadPerCell + q); }

double qp_weight(const StructuredGrid& grid) { return 0.25 * grid.cell_area(); }

}  // namespace

double energy_chemical(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi) {
  const QuadratureField values = evaluate_q1(grid, phi);
  const double w = qp_weight(grid);
  double e = 0.0;
  for (Index c = 0; c < grid.num_cells(); ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const Point g = q1_gradient_at(grid, phi, c, q);
      e += w * (psi(values(c, q)) + 0.5 * mat.gamma * (g.x * g.x + g.y * g.y));
    }
  }
  return e;
}

double energy_elastic(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                      const Vector& u) {
  const QuadratureField values = evaluate_q1(grid, phi);
  const double w = qp_weight(grid);
  double e = 0.0;
  for (Index c = 0; c < grid.num_cells(); ++c)
    for (int q = 0; q < kQuadPerCell; ++q)
      e += w * elastic_energy_density(mat, values(c, q), strain_at(grid, u, c, q));
  return e;
}

double energy_fluid(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                    const Vector& p) {
  const QuadratureField values = evaluate_q1(grid, phi);
  const double w = qp_weight(grid);
  double e = 0.0;
  for (Index c = 0; c < grid.num_cells(); ++c)
    for (int q = 0; q < kQuadPerCell; ++q) e += w * fluid_energy_density(mat, values(c, q), p[c]);
  return e;
}

namespace {

// Per-cell compliance \int_K 1/M and coupling \int_K alpha div u.
struct CellStorage {
  Vector compliance;
  Vector coupling;
};

CellStorage cell_storage(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                         const Vector& u) {
  const QuadratureField values = evaluate_q1(grid, phi);
  const double w = qp_weight(grid);
  CellStorage s{Vector::Zero(grid.num_cells()), Vector::Zero(grid.num_cells())};
  for (Index c = 0; c < grid.num_cells(); ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const double ph = values(c, q);
      s.compliance[c] += w / coeff(mat, ph, Coefficient::M);
      s.coupling[c] += w * coeff(mat, ph, Coefficient::Alpha) * divergence_at(grid, u, c, q);
    }
  }
  return s;
}

}  // namespace

Vector cell_content(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                    const Vector& u, const Vector& p) {
  const CellStorage s = cell_storage(grid, mat, phi, u);
  return (s.compliance.cwiseProduct(p) + s.coupling) / grid.cell_area();
}

Vector cell_pressure(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                     const Vector& u, const Vector& theta) {
  const CellStorage s = cell_storage(grid, mat, phi, u);
  return (grid.cell_area() * theta - s.coupling).cwiseQuotient(s.compliance);
}

double energy_fluid_content(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                            const Vector& u, const Vector& theta) {
  const CellStorage s = cell_storage(grid, mat, phi, u);
  double e = 0.0;
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const double d = grid.cell_area() * theta[c] - s.coupling[c];
    e += 0.5 * d * d / s.compliance[c];
  }
  return e;
}

double free_energy(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                   const Vector& u, const Vector& theta) {
  const double e = energy_chemical(grid, mat, phi) + energy_elastic(grid, mat, phi, u) +
                   energy_fluid_content(grid, mat, phi, u, theta);
  if (!std::isfinite(e)) throw std::domain_error("free_energy: non-finite energy");
  return e;
}

double boundary_term(const StructuredGrid& grid, const Scenario& scenario, const Vector& q) {
  if (!scenario.flow_enabled() || scenario.p_top == 0.0) return 0.0;
  // Top edges: the +y edge orientation is the outward normal.
  double flux = 0.0;
  for (Index i = 0; i < grid.nx(); ++i) flux += q[grid.horizontal_edge_index(i, grid.ny())] * grid.hx();
  return -scenario.p_top * flux;
}

EnergyReport energy_total(const StructuredGrid& grid, const MaterialTable& mat,
                          const SimState& state, const Scenario& scenario,
                          double boundary_work_accumulated) {
  EnergyReport r;
  r.time = state.time;
  r.e_chemical = energy_chemical(grid, mat, state.phi);
  r.e_elastic = energy_elastic(grid, mat, state.phi, state.u);
  r.e_fluid = scenario.flow_enabled() ? energy_fluid(grid, mat, state.phi, state.p) : 0.0;
  r.boundary_term = boundary_term(grid, scenario, state.q);
  r.boundary_work_accumulated = boundary_work_accumulated;
  r.e_total = r.e_chemical + r.e_elastic + r.e_fluid + r.boundary_term;
  return r;
}

Vector chemical_potential_load(const StructuredGrid& grid, const MaterialTable& mat,
                               const Vector& phi, const Vector* phi_old, const Vector& u,
                               const Vector& p) {
  const QuadratureField values = evaluate_q1(grid, phi);
  QuadratureField old_values;
  if (phi_old != nullptr) old_values = evaluate_q1(grid, *phi_old);
  QuadratureField density(grid);
  for (Index c = 0; c < grid.num_cells(); ++c) {
    for (int q = 0; q < kQuadPerCell; ++q) {
      const double ph = values(c, q);
      const double dpsi = phi_old != nullptr ? psi_prime_split(ph, old_values(c, q)) : psi_prime(ph);
      density(c, q) = dpsi + dphi_elastic_energy_density(mat, ph, strain_at(grid, u, c, q)) +
                      dphi_fluid_energy_density(mat, ph, divergence_at(grid, u, c, q), p[c]);
    }
  }
  const SparseMatrix k = assemble_q1_stiffness(grid, QuadratureField(grid, mat.gamma));
  return k * phi + assemble_q1_load(grid, density);
}

Vector elastic_gradient(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                        const Vector& u, const Vector& p) {
  const QuadratureField values = evaluate_q1(grid, phi);
  std::vector<VoigtVector> stress(static_cast<std::size_t>(grid.num_cells() * kQuadPerCell));
  for (Index c = 0; c < grid.num_cells(); ++c)
    for (int q = 0; q < kQuadPerCell; ++q)
      stress[qi(c, q)] = stress_voigt(mat, values(c, q), strain_at(grid, u, c, q), p[c]);
  return assemble_vector_q1_stress_load(grid, stress);
}

Vector content_gradient(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                        const Vector& u, const Vector& theta) {
  return grid.cell_area() * cell_pressure(grid, mat, phi, u, theta);
}

SimState random_smooth_state(const StructuredGrid& grid, const MaterialTable& mat,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  // A few low Fourier modes with random amplitudes and phases.
  auto smooth = [&](double amplitude) {
    std::array<double, 12> c{};
    for (double& v : c) v = uni(rng);
    return [c, amplitude](Point x) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double fx = 1.0 + k;
        const double fy = 2.0 - 0.5 * k;
        s += c[4 * k] * std::sin(kTwoPi * (fx * x.x + c[4 * k + 1])) *
             std::cos(kTwoPi * (fy * x.y + c[4 * k + 2])) +
             0.3 * c[4 * k + 3] * x.x * x.y;
      }
      return amplitude * s / 3.6;
    };
  };

  SimState s = zero_state(grid);
  const auto phi_fn = smooth(0.85);
  const auto ux_fn = smooth(0.05);
  const auto uy_fn = smooth(0.05);
  const auto p_fn = smooth(0.3);
  for (Index n = 0; n < grid.num_nodes(); ++n) {
    const Point x = grid.node_position(n);
    s.phi[n] = std::clamp(phi_fn(x), -0.9, 0.9);
    s.u[vector_dof(n, 0)] = ux_fn(x);
    s.u[vector_dof(n, 1)] = uy_fn(x);
  }
  for (Index c = 0; c < grid.num_cells(); ++c) s.p[c] = p_fn(grid.cell_center(c));
  s.theta = cell_content(grid, mat, s.phi, s.u, s.p);
  s.mu = Vector::Zero(grid.num_nodes());
  return s;
}

GradientCheckResult gradient_check(const StructuredGrid& grid, const MaterialTable& mat,
                                   GradientDirection direction, const SimState& state,
                                   std::uint64_t seed, int directions, double step) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  const Vector p = cell_pressure(grid, mat, state.phi, state.u, state.theta);
  Vector gradient;
  Index n = 0;
  switch (direction) {
    case GradientDirection::Phi:
      gradient = chemical_potential_load(grid, mat, state.phi, nullptr, state.u, p);
      n = grid.num_nodes();
      break;
    case GradientDirection::U:
      gradient = elastic_gradient(grid, mat, state.phi, state.u, p);
      n = 2 * grid.num_nodes();
      break;
    case GradientDirection::Theta:
      gradient = content_gradient(grid, mat, state.phi, state.u, state.theta);
      n = grid.num_cells();
      break;
  }

  // The three parts are differenced separately: summing them first would let
  // the large unperturbed parts swamp the low bits of the one that changes.
  auto parts_along = [&](const Vector& eta, double t) {
    Vector phi = state.phi;
    Vector u = state.u;
    Vector theta = state.theta;
    switch (direction) {
      case GradientDirection::Phi: phi += t * eta; break;
      case GradientDirection::U: u += t * eta; break;
      case GradientDirection::Theta: theta += t * eta; break;
    }
    const std::array<double, 3> parts = {energy_chemical(grid, mat, phi),
                                         energy_elastic(grid, mat, phi, u),
                                         energy_fluid_content(grid, mat, phi, u, theta)};
    for (double e : parts) {
      if (!std::isfinite(e)) throw std::domain_error("gradient_check: non-finite energy");
    }
    return parts;
  };

  GradientCheckResult result{direction, directions, 0.0};
  for (int d = 0; d < directions; ++d) {
    Vector eta(n);
    for (Index i = 0; i < n; ++i) eta[i] = uni(rng);
    const double analytic = gradient.dot(eta);
    const auto plus = parts_along(eta, step);
    const auto minus = parts_along(eta, -step);
    double fd = 0.0;
    for (int k = 0; k < 3; ++k) fd += (plus[k] - minus[k]) / (2.0 * step);
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-300});
    result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic - fd) / scale);
  }
  return result;
}

}  // namespace chb
