#include "chb/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chb {

std::string_view to_string(BoundarySide side) {
  switch (side) {
    case BoundarySide::Interior: return "Interior";
    case BoundarySide::Top: return "Top";
    case BoundarySide::Bottom: return "Bottom";
    case BoundarySide::Left: return "Left";
    case BoundarySide::Right: return "Right";
  }
  return "?";
}

StructuredGrid::StructuredGrid(Index nx, Index ny) : nx_(nx), ny_(ny) {
  if (nx < 2 || ny < 2) {
    throw std::invalid_argument("StructuredGrid: need nx, ny >= 2, got " + std::to_string(nx) +
                                "x" + std::to_string(ny));
  }
  hx_ = 1.0 / static_cast<double>(nx);
  hy_ = 1.0 / static_cast<double>(ny);
}

double StructuredGrid::cell_diameter() const { return std::sqrt(hx_ * hx_ + hy_ * hy_); }

Point StructuredGrid::node_position(Index node) const {
  const Index i = node % (nx_ + 1);
  const Index j = node / (nx_ + 1);
  return {static_cast<double>(i) * hx_, static_cast<double>(j) * hy_};
}

std::array<Index, 2> StructuredGrid::cell_ij(Index cell) const { return {cell % nx_, cell / nx_}; }

Point StructuredGrid::cell_center(Index cell) const {
  const auto [i, j] = cell_ij(cell);
  return {(static_cast<double>(i) + 0.5) * hx_, (static_cast<double>(j) + 0.5) * hy_};
}

Point StructuredGrid::edge_midpoint(Index edge) const {
  if (edge < num_vertical_edges()) {
    const Index i = edge % (nx_ + 1);
    const Index j = edge / (nx_ + 1);
    return {static_cast<double>(i) * hx_, (static_cast<double>(j) + 0.5) * hy_};
  }
  const Index e = edge - num_vertical_edges();
  const Index i = e % nx_;
  const Index j = e / nx_;
  return {(static_cast<double>(i) + 0.5) * hx_, static_cast<double>(j) * hy_};
}

std::array<Index, 4> StructuredGrid::cell_nodes(Index cell) const {
  const auto [i, j] = cell_ij(cell);
  return {node_index(i, j), node_index(i + 1, j), node_index(i, j + 1), node_index(i + 1, j + 1)};
}

std::array<Index, 4> StructuredGrid::cell_edges(Index cell) const {
  const auto [i, j] = cell_ij(cell);
  return {vertical_edge_index(i, j), vertical_edge_index(i + 1, j), horizontal_edge_index(i, j),
          horizontal_edge_index(i, j + 1)};
}

std::array<Index, 2> StructuredGrid::edge_cells(Index edge) const {
  if (edge < num_vertical_edges()) {
    const Index i = edge % (nx_ + 1);
    const Index j = edge / (nx_ + 1);
    return {i > 0 ? cell_index(i - 1, j) : -1, i < nx_ ? cell_index(i, j) : -1};
  }
  const Index e = edge - num_vertical_edges();
  const Index i = e % nx_;
  const Index j = e / nx_;
  return {j > 0 ? cell_index(i, j - 1) : -1, j < ny_ ? cell_index(i, j) : -1};
}

EdgeDirection StructuredGrid::edge_direction(Index edge) const {
  return edge < num_vertical_edges() ? EdgeDirection::Vertical : EdgeDirection::Horizontal;
}

double StructuredGrid::edge_length(Index edge) const {
  return edge_direction(edge) == EdgeDirection::Vertical ? hy_ : hx_;
}

Point StructuredGrid::edge_normal(Index edge) const {
  return edge_direction(edge) == EdgeDirection::Vertical ? Point{1.0, 0.0} : Point{0.0, 1.0};
}

BoundarySide StructuredGrid::edge_side(Index edge) const {
  if (edge < num_vertical_edges()) {
    const Index i = edge % (nx_ + 1);
    if (i == 0) return BoundarySide::Left;
    if (i == nx_) return BoundarySide::Right;
    return BoundarySide::Interior;
  }
  const Index j = (edge - num_vertical_edges()) / nx_;
  if (j == 0) return BoundarySide::Bottom;
  if (j == ny_) return BoundarySide::Top;
  return BoundarySide::Interior;
}

BoundarySide StructuredGrid::node_side(Index node) const {
  const Index i = node % (nx_ + 1);
  const Index j = node / (nx_ + 1);
  if (j == ny_) return BoundarySide::Top;
  if (j == 0) return BoundarySide::Bottom;
  if (i == 0) return BoundarySide::Left;
  if (i == nx_) return BoundarySide::Right;
  return BoundarySide::Interior;
}

std::array<QuadPoint, 4> StructuredGrid::quadrature(Index cell) const {
  const auto [i, j] = cell_ij(cell);
  const double x0 = static_cast<double>(i) * hx_;
  const double y0 = static_cast<double>(j) * hy_;
  const double w = 0.25 * hx_ * hy_;
  std::array<QuadPoint, 4> rule;
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      QuadPoint& q = rule[static_cast<std::size_t>(2 * b + a)];
      q.s = kGauss01[static_cast<std::size_t>(a)];
      q.t = kGauss01[static_cast<std::size_t>(b)];
      q.x = {x0 + q.s * hx_, y0 + q.t * hy_};
      q.weight = w;
    }
  }
  return rule;
}

}  // namespace chb
