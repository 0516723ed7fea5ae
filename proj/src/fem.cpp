#include "chb/fem.hpp"

#include <Eigen/Cholesky>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chb {

namespace {

using Triplet = Eigen::Triplet<double>;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw AssemblyError(std::string(what) + ": non-finite coefficient value");
  }
}

std::array<double, 4> cell_coeff(const QuadratureField& f, Index cell, const char* what) {
  std::array<double, 4> c{};
  for (int q = 0; q < kQuadPerCell; ++q) {
    c[static_cast<std::size_t>(q)] = f(cell, q);
    require_finite(c[static_cast<std::size_t>(q)], what);
  }
  return c;
}

void check_size(const StructuredGrid& grid, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(grid.num_cells() * kQuadPerCell)) {
    throw AssemblyError(std::string(what) + ": coefficient field does not match the grid");
  }
}

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& t) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(t.begin(), t.end());
  a.prune(0.0);
  a.makeCompressed();
  return a;
}

}  // namespace

QuadratureField QuadratureField::from_cells(const StructuredGrid& grid,
                                            std::span<const double> cells) {
  if (static_cast<Index>(cells.size()) != grid.num_cells()) {
    throw AssemblyError("QuadratureField::from_cells: size mismatch");
  }
  QuadratureField f(grid);
  for (Index c = 0; c < grid.num_cells(); ++c)
    for (int q = 0; q < kQuadPerCell; ++q) f(c, q) = cells[static_cast<std::size_t>(c)];
  return f;
}

std::array<double, 4> q1_values(double s, double t) {
  return {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
}

std::array<Point, 4> q1_gradients(double s, double t, double hx, double hy) {
  return {Point{-(1 - t) / hx, -(1 - s) / hy}, Point{(1 - t) / hx, -s / hy},
          Point{-t / hx, (1 - s) / hy}, Point{t / hx, s / hy}};
}

std::array<Point, 4> rt0_values(double s, double t) {
  return {Point{1 - s, 0.0}, Point{s, 0.0}, Point{0.0, 1 - t}, Point{0.0, t}};
}

std::array<double, 4> rt0_divergence(double hx, double hy) {
  return {-1.0 / hx, 1.0 / hx, -1.0 / hy, 1.0 / hy};
}

Eigen::Matrix<double, 3, 8> q1_strain_matrix(double s, double t, double hx, double hy) {
  const auto g = q1_gradients(s, t, hx, hy);
  Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
  for (int a = 0; a < 4; ++a) {
    const Point& d = g[static_cast<std::size_t>(a)];
    b(0, 2 * a) = d.x;
    b(1, 2 * a + 1) = d.y;
    b(2, 2 * a) = d.y;
    b(2, 2 * a + 1) = d.x;
  }
  return b;
}

QuadratureField evaluate_q1(const StructuredGrid& grid, const Vector& nodal) {
  QuadratureField f(grid);
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    const auto rule = grid.quadrature(c);
    for (int q = 0; q < kQuadPerCell; ++q) {
      const auto n = q1_values(rule[static_cast<std::size_t>(q)].s, rule[static_cast<std::size_t>(q)].t);
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += n[static_cast<std::size_t>(a)] * nodal[nodes[static_cast<std::size_t>(a)]];
      f(c, q) = v;
    }
  }
  return f;
}

Point q1_gradient_at(const StructuredGrid& grid, const Vector& nodal, Index cell, int q) {
  const auto nodes = grid.cell_nodes(cell);
  const double s = kGauss01[static_cast<std::size_t>(q % 2)];
  const double t = kGauss01[static_cast<std::size_t>(q / 2)];
  const auto g = q1_gradients(s, t, grid.hx(), grid.hy());
  Point r;
  for (std::size_t a = 0; a < 4; ++a) {
    r.x += g[a].x * nodal[nodes[a]];
    r.y += g[a].y * nodal[nodes[a]];
  }
  return r;
}

VoigtVector strain_at(const StructuredGrid& grid, const Vector& u, Index cell, int q) {
  const auto nodes = grid.cell_nodes(cell);
  const double s = kGauss01[static_cast<std::size_t>(q % 2)];
  const double t = kGauss01[static_cast<std::size_t>(q / 2)];
  const auto g = q1_gradients(s, t, grid.hx(), grid.hy());
  VoigtVector e = VoigtVector::Zero();
  for (std::size_t a = 0; a < 4; ++a) {
    const double ux = u[vector_dof(nodes[a], 0)];
    const double uy = u[vector_dof(nodes[a], 1)];
    e[0] += g[a].x * ux;
    e[1] += g[a].y * uy;
    e[2] += g[a].y * ux + g[a].x * uy;
  }
  return e;
}

double divergence_at(const StructuredGrid& grid, const Vector& u, Index cell, int q) {
  const VoigtVector e = strain_at(grid, u, cell, q);
  return e[0] + e[1];
}

std::vector<Point> rt0_cell_average(const StructuredGrid& grid, const Vector& q) {
  std::vector<Point> avg(static_cast<std::size_t>(grid.num_cells()));
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto e = grid.cell_edges(c);
    avg[static_cast<std::size_t>(c)] = {0.5 * (q[e[0]] + q[e[1]]), 0.5 * (q[e[2]] + q[e[3]])};
  }
  return avg;
}

Eigen::Matrix4d q1_element_mass(double hx, double hy, const std::array<double, 4>& coeff) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  const double w = 0.25 * hx * hy;
  for (int q = 0; q < 4; ++q) {
    const auto n = q1_values(kGauss01[static_cast<std::size_t>(q % 2)], kGauss01[static_cast<std::size_t>(q / 2)]);
    const double c = coeff[static_cast<std::size_t>(q)] * w;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) m(a, b) += c * n[static_cast<std::size_t>(a)] * n[static_cast<std::size_t>(b)];
  }
  return m;
}

Eigen::Matrix4d q1_element_stiffness(double hx, double hy, const std::array<double, 4>& coeff) {
  Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
  const double w = 0.25 * hx * hy;
  for (int q = 0; q < 4; ++q) {
    const auto g = q1_gradients(kGauss01[static_cast<std::size_t>(q % 2)], kGauss01[static_cast<std::size_t>(q / 2)], hx, hy);
    const double c = coeff[static_cast<std::size_t>(q)] * w;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        k(static_cast<Index>(a), static_cast<Index>(b)) += c * (g[a].x * g[b].x + g[a].y * g[b].y);
  }
  return k;
}

Eigen::Matrix4d rt0_element_mass(double hx, double hy, const std::array<double, 4>& inv_perm) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  const double w = 0.25 * hx * hy;
  for (int q = 0; q < 4; ++q) {
    const auto v = rt0_values(kGauss01[static_cast<std::size_t>(q % 2)], kGauss01[static_cast<std::size_t>(q / 2)]);
    const double c = inv_perm[static_cast<std::size_t>(q)] * w;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        m(static_cast<Index>(a), static_cast<Index>(b)) += c * (v[a].x * v[b].x + v[a].y * v[b].y);
  }
  return m;
}

namespace {

template <class ElementFn>
SparseMatrix assemble_scalar_q1(const StructuredGrid& grid, const QuadratureField& coeff,
                                const char* what, ElementFn&& element) {
  check_size(grid, coeff.size(), what);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells() * 16));
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const Eigen::Matrix4d ke = element(grid.hx(), grid.hy(), cell_coeff(coeff, c, what));
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        t.emplace_back(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)], ke(a, b));
  }
  return from_triplets(grid.num_nodes(), grid.num_nodes(), t);
}

}  // namespace

SparseMatrix assemble_q1_mass(const StructuredGrid& grid, const QuadratureField& coeff) {
  return assemble_scalar_q1(grid, coeff, "assemble_q1_mass", q1_element_mass);
}

SparseMatrix assemble_q1_stiffness(const StructuredGrid& grid, const QuadratureField& coeff) {
  return assemble_scalar_q1(grid, coeff, "assemble_q1_stiffness", q1_element_stiffness);
}

SparseMatrix assemble_elastic_stiffness(const StructuredGrid& grid, const VoigtField& stiffness) {
  check_size(grid, stiffness.size(), "assemble_elastic_stiffness");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells() * 64));
  const double w = 0.25 * grid.cell_area();
  for (Index c = 0; c < grid.num_cells(); ++c) {
    Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
    for (int q = 0; q < kQuadPerCell; ++q) {
      const Voigt& cq = stiffness[static_cast<std::size_t>(c * kQuadPerCell + q)];
      if (!cq.allFinite()) throw AssemblyError("assemble_elastic_stiffness: non-finite tensor");
      if (Eigen::LLT<Voigt>(0.5 * (cq + cq.transpose())).info() != Eigen::Success ||
          (cq - cq.transpose()).cwiseAbs().maxCoeff() > 1e-12 * cq.cwiseAbs().maxCoeff()) {
        std::ostringstream os;
        os << "assemble_elastic_stiffness: stiffness at cell " << c << " is not SPD";
        throw AssemblyError(os.str());
      }
      const auto b = q1_strain_matrix(kGauss01[static_cast<std::size_t>(q % 2)],
                                      kGauss01[static_cast<std::size_t>(q / 2)], grid.hx(), grid.hy());
      ke.noalias() += w * b.transpose() * cq * b;
    }
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        t.emplace_back(vector_dof(nodes[static_cast<std::size_t>(a / 2)], a % 2),
                       vector_dof(nodes[static_cast<std::size_t>(b / 2)], b % 2), ke(a, b));
  }
  return from_triplets(2 * grid.num_nodes(), 2 * grid.num_nodes(), t);
}

SparseMatrix assemble_rt0_mass(const StructuredGrid& grid, const QuadratureField& inv_perm) {
  check_size(grid, inv_perm.size(), "assemble_rt0_mass");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells() * 8));
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto k = cell_coeff(inv_perm, c, "assemble_rt0_mass");
    for (double v : k) {
      if (v <= 0.0) throw AssemblyError("assemble_rt0_mass: nonpositive inverse permeability");
    }
    const Eigen::Matrix4d me = rt0_element_mass(grid.hx(), grid.hy(), k);
    const auto edges = grid.cell_edges(c);
    // Only parallel edges couple; perpendicular entries vanish identically.
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a / 2 == b / 2)
          t.emplace_back(edges[static_cast<std::size_t>(a)], edges[static_cast<std::size_t>(b)], me(a, b));
  }
  return from_triplets(grid.num_edges(), grid.num_edges(), t);
}

SparseMatrix assemble_divergence(const StructuredGrid& grid) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells() * 4));
  const auto div = rt0_divergence(grid.hx(), grid.hy());
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto edges = grid.cell_edges(c);
    for (std::size_t a = 0; a < 4; ++a) t.emplace_back(c, edges[a], div[a] * grid.cell_area());
  }
  return from_triplets(grid.num_cells(), grid.num_edges(), t);
}

SparseMatrix assemble_divu_p0_coupling(const StructuredGrid& grid, const QuadratureField& coeff) {
  check_size(grid, coeff.size(), "assemble_divu_p0_coupling");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(grid.num_cells() * 8));
  const double w = 0.25 * grid.cell_area();
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto k = cell_coeff(coeff, c, "assemble_divu_p0_coupling");
    Eigen::Matrix<double, 1, 8> row = Eigen::Matrix<double, 1, 8>::Zero();
    for (int q = 0; q < kQuadPerCell; ++q) {
      const auto b = q1_strain_matrix(kGauss01[static_cast<std::size_t>(q % 2)],
                                      kGauss01[static_cast<std::size_t>(q / 2)], grid.hx(), grid.hy());
      row += w * k[static_cast<std::size_t>(q)] * (b.row(0) + b.row(1));
    }
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 8; ++a) t.emplace_back(c, vector_dof(nodes[static_cast<std::size_t>(a / 2)], a % 2), row(a));
  }
  return from_triplets(grid.num_cells(), 2 * grid.num_nodes(), t);
}

Vector assemble_q1_load(const StructuredGrid& grid, const QuadratureField& f) {
  check_size(grid, f.size(), "assemble_q1_load");
  Vector r = Vector::Zero(grid.num_nodes());
  const double w = 0.25 * grid.cell_area();
  for (Index c = 0; c < grid.num_cells(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int q = 0; q < kQuadPerCell; ++q) {
      const double v = f(c, q);
      require_finite(v, "assemble_q1_load");
      const auto n = q1_values(kGauss01[static_cast<std::size_t>(q % 2)], kGauss01[static_cast<std::size_t>(q / 2)]);
      for (std::size_t a = 0; a < 4; ++a) r[nodes[a]] += w * v * n[a];
    }
  }
  return r;
}

Vector assemble_vector_q1_stress_load(const StructuredGrid& grid,
                                      std::span<const VoigtVector> stress) {
  check_size(grid, stress.size(), "assemble_vector_q1_stress_load");
  Vector r = Vector::Zero(2 * grid.num_nodes());
  const double w = 0.25 * grid.cell_area();
  for (Index c = 0; c < grid.num_cells(); ++c) {
    Eigen::Matrix<double, 8, 1> re = Eigen::Matrix<double, 8, 1>::Zero();
    for (int q = 0; q < kQuadPerCell; ++q) {
      const auto b = q1_strain_matrix(kGauss01[static_cast<std::size_t>(q % 2)],
                                      kGauss01[static_cast<std::size_t>(q / 2)], grid.hx(), grid.hy());
      re.noalias() += w * b.transpose() * stress[static_cast<std::size_t>(c * kQuadPerCell + q)];
    }
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 8; ++a) r[vector_dof(nodes[static_cast<std::size_t>(a / 2)], a % 2)] += re(a);
  }
  return r;
}

Vector integrate_cells(const StructuredGrid& grid, const QuadratureField& f) {
  check_size(grid, f.size(), "integrate_cells");
  Vector r(grid.num_cells());
  const double w = 0.25 * grid.cell_area();
  for (Index c = 0; c < grid.num_cells(); ++c) {
    double s = 0.0;
    for (int q = 0; q < kQuadPerCell; ++q) s += f(c, q);
    r[c] = w * s;
  }
  return r;
}

void apply_dirichlet(SparseMatrix& a, Vector& rhs, std::span<const Index> dofs,
                     std::span<const double> values) {
  if (dofs.size() != values.size()) throw std::invalid_argument("apply_dirichlet: size mismatch");
  std::vector<char> fixed(static_cast<std::size_t>(a.rows()), 0);
  Vector g = Vector::Zero(a.rows());
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    fixed[static_cast<std::size_t>(dofs[k])] = 1;
    g[dofs[k]] = values[k];
  }
  for (Index col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const bool row_fixed = fixed[static_cast<std::size_t>(it.row())] != 0;
      const bool col_fixed = fixed[static_cast<std::size_t>(col)] != 0;
      if (col_fixed && !row_fixed) rhs[it.row()] -= it.value() * g[col];
      if (row_fixed || col_fixed) it.valueRef() = it.row() == col ? 1.0 : 0.0;
    }
  }
  for (Index d : dofs) rhs[d] = g[d];
  a.prune(0.0);
  a.makeCompressed();
}

double asymmetry(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double scale = 0.0;
  double worst = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  for (Index k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return scale > 0.0 ? worst / scale : 0.0;
}

// ---------------------------------------------------------------------------

struct LinearSolver::Impl {
  using Ldlt = Eigen::SimplicialLDLT<SparseMatrix>;
  using Lu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

  SolverHint hint;
  std::unique_ptr<Ldlt> ldlt;
  std::unique_ptr<Lu> lu;
  bool ldlt_analyzed = false;
  bool lu_analyzed = false;
  bool use_lu = false;
  SparseMatrix matrix;
  std::vector<int> outer;
  std::vector<int> inner;
  bool factorized = false;

  explicit Impl(SolverHint h) : hint(h) {}

  bool same_pattern(const SparseMatrix& a) const {
    if (!factorized || a.rows() != matrix.rows() ||
        a.nonZeros() != static_cast<Index>(inner.size()))
      return false;
    return std::equal(outer.begin(), outer.end(), a.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), a.innerIndexPtr());
  }

  bool factorize_ldlt(bool reuse) {
    if (!ldlt) ldlt = std::make_unique<Ldlt>();
    if (!reuse || !ldlt_analyzed) ldlt->analyzePattern(matrix);
    ldlt_analyzed = true;
    ldlt->factorize(matrix);
    if (ldlt->info() != Eigen::Success) return false;
    // A zero pivot means LDL^T without pivoting broke down.
    return (ldlt->vectorD().array() != 0.0).all() && ldlt->vectorD().allFinite();
  }

  void factorize_lu(bool reuse) {
    if (!lu) lu = std::make_unique<Lu>();
    if (!reuse || !lu_analyzed) lu->analyzePattern(matrix);
    lu_analyzed = true;
    lu->factorize(matrix);
    if (lu->info() != Eigen::Success) {
      throw SolverError("solve_sparse: factorization failed (singular matrix)", 0.0);
    }
  }

  Vector apply_inverse(const Vector& rhs) const {
    return use_lu ? Vector(lu->solve(rhs)) : Vector(ldlt->solve(rhs));
  }

  bool acceptable(const Vector& x, const Vector& rhs, double& rel) const {
    const Vector r = matrix * x - rhs;
    const double rnorm = r.norm();
    const double bnorm = rhs.norm();
    rel = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    if (!x.allFinite()) return false;
    if (rnorm <= 1e-10 * bnorm) return true;
    // Componentwise backward error bound for the direct solvers.
    const Vector ax = matrix.cwiseAbs() * x.cwiseAbs();
    for (Index i = 0; i < r.size(); ++i) {
      if (std::abs(r[i]) > 1e-11 * ax[i] + 1e-10 * std::abs(rhs[i])) return false;
    }
    return true;
  }
};

LinearSolver::LinearSolver(SolverHint hint) : impl_(std::make_unique<Impl>(hint)) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseMatrix& a_in) {
  if (a_in.rows() != a_in.cols()) throw SolverError("solve_sparse: matrix is not square", 0.0);
  SparseMatrix a = a_in;
  a.makeCompressed();
  Impl& s = *impl_;
  const bool reuse = s.same_pattern(a);
  s.matrix = std::move(a);
  if (!reuse) {
    s.outer.assign(s.matrix.outerIndexPtr(), s.matrix.outerIndexPtr() + s.matrix.outerSize() + 1);
    s.inner.assign(s.matrix.innerIndexPtr(), s.matrix.innerIndexPtr() + s.matrix.nonZeros());
  }
  s.factorized = false;
  s.use_lu = s.hint == SolverHint::General;
  if (!s.use_lu && !s.factorize_ldlt(reuse)) {
    if (s.hint == SolverHint::SPD) {
      throw SolverError("solve_sparse: factorization failed (singular matrix)", 0.0);
    }
    s.use_lu = true;
  }
  if (s.use_lu) s.factorize_lu(reuse);
  s.factorized = true;
}

Vector LinearSolver::solve(const Vector& rhs) const {
  Impl& s = *impl_;
  if (!s.factorized) throw SolverError("solve_sparse: solve() before factorize()", 0.0);
  if (rhs.size() != s.matrix.rows()) throw SolverError("solve_sparse: dimension mismatch", 0.0);
  Vector x = s.apply_inverse(rhs);
  double rel = 0.0;
  if (s.acceptable(x, rhs, rel)) return x;
  if (!s.use_lu && s.hint == SolverHint::SymmetricIndefinite) {
    // Unpivoted LDL^T lost accuracy; redo this matrix with pivoted LU.
    s.use_lu = true;
    s.factorize_lu(false);
    x = s.lu->solve(rhs);
    if (s.acceptable(x, rhs, rel)) return x;
  }
  if (!x.allFinite()) throw SolverError("solve_sparse: non-finite solution", rel);
  std::ostringstream os;
  os << "solve_sparse: relative residual " << rel << " above tolerance";
  throw SolverError(os.str(), rel);
}

Vector LinearSolver::solve_updated(const SparseMatrix& a, const Vector& rhs) {
  Impl& s = *impl_;
  if (s.factorized && a.rows() == s.matrix.rows() && a.cols() == a.rows() &&
      rhs.size() == a.rows()) {
    // The stale factorization serves as a preconditioner for iterative
    // refinement; fall through to a fresh factorization unless it contracts fast.
    const Vector scale_b = rhs.cwiseAbs();
    const SparseMatrix abs_a = a.cwiseAbs();
    Vector x = s.apply_inverse(rhs);
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 12 && x.allFinite(); ++it) {
      const Vector r = rhs - a * x;
      const double err = r.lpNorm<Eigen::Infinity>();
      const double floor = 1e-14 * (abs_a * x.cwiseAbs() + scale_b).lpNorm<Eigen::Infinity>();
      if (err <= floor) return x;
      if (err > 0.25 * previous) break;
      previous = err;
      x += s.apply_inverse(r);
    }
  }
  factorize(a);
  return solve(rhs);
}

Vector solve_sparse(const SparseMatrix& a, const Vector& rhs, SolverHint hint) {
  LinearSolver solver(hint);
  solver.factorize(a);
  return solver.solve(rhs);
}

}  // namespace chb
