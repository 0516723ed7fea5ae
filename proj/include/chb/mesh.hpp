#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace chb {

using Index = std::ptrdiff_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundarySide { Interior, Top, Bottom, Left, Right };

std::string_view to_string(BoundarySide side);

enum class EdgeDirection {
  Vertical,   ///< normal +x
  Horizontal  ///< normal +y
};

/// Quadrature point on a cell: physical location, reference coordinates in
/// [0,1]^2 and the weight (includes the cell area).
struct QuadPoint {
  Point x;
  double s = 0.0;
  double t = 0.0;
  double weight = 0.0;
};

/// Uniform tensor-product mesh of the unit square.
///
/// Numbering:
///  - node (i, j), 0 <= i <= nx, 0 <= j <= ny   ->  j * (nx + 1) + i
///  - cell (i, j), 0 <= i <  nx, 0 <= j <  ny   ->  j * nx + i
///  - vertical edges first, (i, j) with i <= nx, j < ny -> j * (nx + 1) + i
///  - horizontal edges after, (i, j) with i < nx, j <= ny
///                                    -> nx_vertical + j * nx + i
///
/// Local node order inside a cell is tensor-product: 0=(i,j), 1=(i+1,j),
/// 2=(i,j+1), 3=(i+1,j+1). Local edge order: 0=left, 1=right, 2=bottom,
/// 3=top. Vertical edge normals point in +x, horizontal in +y.
class StructuredGrid {
 public:
  StructuredGrid(Index nx, Index ny);

  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  double cell_area() const { return hx_ * hy_; }
  double cell_diameter() const;

  Index num_nodes() const { return (nx_ + 1) * (ny_ + 1); }
  Index num_cells() const { return nx_ * ny_; }
  Index num_vertical_edges() const { return (nx_ + 1) * ny_; }
  Index num_horizontal_edges() const { return nx_ * (ny_ + 1); }
  Index num_edges() const { return num_vertical_edges() + num_horizontal_edges(); }

  Index node_index(Index i, Index j) const { return j * (nx_ + 1) + i; }
  Index cell_index(Index i, Index j) const { return j * nx_ + i; }
  Index vertical_edge_index(Index i, Index j) const { return j * (nx_ + 1) + i; }
  Index horizontal_edge_index(Index i, Index j) const {
    return num_vertical_edges() + j * nx_ + i;
  }

  Point node_position(Index node) const;
  Point cell_center(Index cell) const;
  Point edge_midpoint(Index edge) const;
  std::array<Index, 2> cell_ij(Index cell) const;

  std::array<Index, 4> cell_nodes(Index cell) const;
  std::array<Index, 4> cell_edges(Index cell) const;
  /// Adjacent cells of an edge: {behind, ahead} along the edge normal, so the
  /// lower index comes first; -1 marks "outside".
  std::array<Index, 2> edge_cells(Index edge) const;

  EdgeDirection edge_direction(Index edge) const;
  double edge_length(Index edge) const;
  Point edge_normal(Index edge) const;

  BoundarySide edge_side(Index edge) const;
  /// Corner nodes resolve Top > Bottom > Left > Right.
  BoundarySide node_side(Index node) const;

  /// 2x2 Gauss rule on a cell.
  std::array<QuadPoint, 4> quadrature(Index cell) const;

 private:
  Index nx_;
  Index ny_;
  double hx_;
  double hy_;
};

/// Reference 2-point Gauss abscissae on [0,1].
inline constexpr std::array<double, 2> kGauss01 = {
    0.5 - 0.28867513459481288225, 0.5 + 0.28867513459481288225};

}  // namespace chb
