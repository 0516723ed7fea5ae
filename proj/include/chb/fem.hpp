#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chb/mesh.hpp"

namespace chb {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Voigt = Eigen::Matrix3d;
/// Strain or stress in Voigt form [xx, yy, 2xy] (strain) / [xx, yy, xy] (stress).
using VoigtVector = Eigen::Vector3d;

inline constexpr int kQuadPerCell = 4;

/// Scalar values at every quadrature point of every cell, cell-major.
class QuadratureField {
 public:
  QuadratureField() = default;
  explicit QuadratureField(const StructuredGrid& grid, double value = 0.0)
      : values_(static_cast<std::size_t>(grid.num_cells() * kQuadPerCell), value) {}

  static QuadratureField from_cells(const StructuredGrid& grid, std::span<const double> cells);

  double operator()(Index cell, int q) const {
    return values_[static_cast<std::size_t>(cell * kQuadPerCell + q)];
  }
  double& operator()(Index cell, int q) {
    return values_[static_cast<std::size_t>(cell * kQuadPerCell + q)];
  }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Voigt stiffness matrix at every quadrature point.
using VoigtField = std::vector<Voigt>;

/// Thrown for non-finite or out-of-range coefficient data fed to assembly.
class AssemblyError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a linear solve fails; carries the achieved relative residual.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// ---------------------------------------------------------------------------
// Reference basis functions. (s, t) are reference coordinates in [0,1]^2.

std::array<double, 4> q1_values(double s, double t);
/// Physical gradients of the four Q1 shape functions.
std::array<Point, 4> q1_gradients(double s, double t, double hx, double hy);

/// RT0 basis in local edge order (left, right, bottom, top); the dof is the
/// normal velocity in the global edge orientation (+x / +y).
std::array<Point, 4> rt0_values(double s, double t);
std::array<double, 4> rt0_divergence(double hx, double hy);

/// Symmetric-gradient Voigt rows B (3 x 8) for the vector Q1 element, dof
/// layout [u0x, u0y, u1x, u1y, ...].
Eigen::Matrix<double, 3, 8> q1_strain_matrix(double s, double t, double hx, double hy);

// ---------------------------------------------------------------------------
// Dof layout helpers.

inline Index vector_dof(Index node, int component) { return 2 * node + component; }

/// Q1 interpolant values at every quadrature point.
QuadratureField evaluate_q1(const StructuredGrid& grid, const Vector& nodal);
/// Gradient of the Q1 interpolant at one quadrature point.
Point q1_gradient_at(const StructuredGrid& grid, const Vector& nodal, Index cell, int q);
/// Voigt strain [exx, eyy, 2exy] of a vector Q1 field at one quadrature point.
VoigtVector strain_at(const StructuredGrid& grid, const Vector& u, Index cell, int q);
double divergence_at(const StructuredGrid& grid, const Vector& u, Index cell, int q);

/// RT0 interpolant by midpoint normal component.
template <class Fn>
Vector rt0_interpolate(const StructuredGrid& grid, Fn&& field) {
  Vector q(grid.num_edges());
  for (Index e = 0; e < grid.num_edges(); ++e) {
    const Point m = grid.edge_midpoint(e);
    const Point n = grid.edge_normal(e);
    const Point v = field(m);
    q[e] = v.x * n.x + v.y * n.y;
  }
  return q;
}

template <class Fn>
Vector q1_interpolate(const StructuredGrid& grid, Fn&& field) {
  Vector v(grid.num_nodes());
  for (Index n = 0; n < grid.num_nodes(); ++n) v[n] = field(grid.node_position(n));
  return v;
}

/// Cell-averaged velocity of an RT0 field (used for output).
std::vector<Point> rt0_cell_average(const StructuredGrid& grid, const Vector& q);

// ---------------------------------------------------------------------------
// Element matrices on a single hx x hy cell with per-quadrature-point data.

Eigen::Matrix4d q1_element_mass(double hx, double hy, const std::array<double, 4>& coeff);
Eigen::Matrix4d q1_element_stiffness(double hx, double hy, const std::array<double, 4>& coeff);
Eigen::Matrix4d rt0_element_mass(double hx, double hy, const std::array<double, 4>& inv_perm);

// ---------------------------------------------------------------------------
// Global assembly.

SparseMatrix assemble_q1_mass(const StructuredGrid& grid, const QuadratureField& coeff);
SparseMatrix assemble_q1_stiffness(const StructuredGrid& grid, const QuadratureField& coeff);
SparseMatrix assemble_elastic_stiffness(const StructuredGrid& grid, const VoigtField& stiffness);
SparseMatrix assemble_rt0_mass(const StructuredGrid& grid, const QuadratureField& inv_perm);
/// B (cells x edges): B_kj = \int_k div v_j.
SparseMatrix assemble_divergence(const StructuredGrid& grid);
/// D (cells x 2*nodes): D_kj = \int_k coeff div(phi_j).
SparseMatrix assemble_divu_p0_coupling(const StructuredGrid& grid, const QuadratureField& coeff);

/// \int f N_j for a quadrature-point field f.
Vector assemble_q1_load(const StructuredGrid& grid, const QuadratureField& f);
/// \int stress : eps(N_j) for a quadrature-point Voigt stress field (cell-major).
Vector assemble_vector_q1_stress_load(const StructuredGrid& grid,
                                      std::span<const VoigtVector> stress);
/// \int_k f for each cell.
Vector integrate_cells(const StructuredGrid& grid, const QuadratureField& f);

/// Symmetric elimination of prescribed dofs: the rhs is lifted with the
/// eliminated columns, rows/columns cleared, unit diagonal, rhs = value.
void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const Index> dofs,
                     std::span<const double> values);

/// Relative asymmetry max|A_ij - A_ji| / max|A|.
double asymmetry(const SparseMatrix& a);

// ---------------------------------------------------------------------------
// Sparse solves.

enum class SolverHint { SPD, SymmetricIndefinite, General };

/// Direct sparse solver. Reuses the symbolic analysis as long as the sparsity
/// pattern of successive matrices does not change.
class LinearSolver {
 public:
  explicit LinearSolver(SolverHint hint);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  void factorize(const SparseMatrix& a);
  Vector solve(const Vector& rhs) const;
  /// Solves a x = rhs. The previous factorization is reused as a
  /// preconditioner for iterative refinement while that converges quickly to
  /// roundoff; otherwise `a` is factorized afresh.
  Vector solve_updated(const SparseMatrix& a, const Vector& rhs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Vector solve_sparse(const SparseMatrix& a, const Vector& rhs, SolverHint hint);

}  // namespace chb
