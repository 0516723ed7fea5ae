#pragma once

#include <cstdint>

#include "chb/material.hpp"
#include "chb/state.hpp"

namespace chb {

struct EnergyReport {
  double time = 0.0;
  double e_chemical = 0.0;
  double e_elastic = 0.0;
  double e_fluid = 0.0;
  /// -\int_{Gamma_D} p_D (q . n) at the current time level.
  double boundary_term = 0.0;
  /// Time-integrated boundary work sum_n tau \int_{Gamma_D} p_D (q^n . n).
  double boundary_work_accumulated = 0.0;
  double e_total = 0.0;

  bool operator==(const EnergyReport&) const = default;
};

double energy_chemical(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi);
double energy_elastic(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                      const Vector& u);
/// Pressure form: \int p^2 / (2 M(phi)).
double energy_fluid(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                    const Vector& p);
/// Content form; equals energy_fluid() for p = cell_pressure(theta).
double energy_fluid_content(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                            const Vector& u, const Vector& theta);

/// Total free energy in the (phi, u, theta) state variables.
double free_energy(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                   const Vector& u, const Vector& theta);

/// Cell contents theta_K = (p_K \int_K 1/M + \int_K alpha div u) / |K| and the
/// inverse map.
Vector cell_content(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                    const Vector& u, const Vector& p);
Vector cell_pressure(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                     const Vector& u, const Vector& theta);

/// -\int_{Gamma_D} p_D q.n over the top (p_top) and bottom (0) boundaries.
double boundary_term(const StructuredGrid& grid, const Scenario& scenario, const Vector& q);

EnergyReport energy_total(const StructuredGrid& grid, const MaterialTable& mat,
                          const SimState& state, const Scenario& scenario,
                          double boundary_work_accumulated = 0.0);

// ---------------------------------------------------------------------------
// Discrete variational derivatives. These are the load vectors the solvers
// assemble; they are exact gradients of the discrete energies above.

/// gamma K phi + \int (psi' + dphi e_el + dphi e_fl) N_j. When phi_old is
/// given, psi' is replaced by the convex split phi^3 - phi_old.
Vector chemical_potential_load(const StructuredGrid& grid, const MaterialTable& mat,
                               const Vector& phi, const Vector* phi_old, const Vector& u,
                               const Vector& p);

/// A(C(phi)) u - \int C(phi) T(phi) : eps(N_j) - \int alpha(phi) p div(N_j).
Vector elastic_gradient(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                        const Vector& u, const Vector& p);

/// Gradient of free_energy in theta: |K| p_K.
Vector content_gradient(const StructuredGrid& grid, const MaterialTable& mat, const Vector& phi,
                        const Vector& u, const Vector& theta);

enum class GradientDirection { Phi, U, Theta };

struct GradientCheckResult {
  GradientDirection direction;
  int directions = 0;
  double max_relative_error = 0.0;
};

/// Smooth random state on the grid, phi kept inside (-0.9, 0.9).
SimState random_smooth_state(const StructuredGrid& grid, const MaterialTable& mat,
                             std::uint64_t seed);

/// Compares the assembled derivative with central differences of
/// free_energy() along seeded random directions.
GradientCheckResult gradient_check(const StructuredGrid& grid, const MaterialTable& mat,
                                   GradientDirection direction, const SimState& state,
                                   std::uint64_t seed, int directions = 10, double step = 1e-5);

}  // namespace chb
