#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace nspost {

using Point = Eigen::Vector2d;
using Barycentric = std::array<double, 3>;

/// Edge of the triangulation; `cells[1] < 0` marks a boundary edge.
struct Edge {
  std::array<int, 2> nodes;
  std::array<int, 2> cells;
};

/// Result of point location: containing cell and barycentric coordinates
/// with respect to that cell's vertex order.
struct PointLocation {
  int cell;
  Barycentric bary;
};

/// Structured triangulation of the unit square with nodes (i/N, j/N).
///
/// Node (i, j) has index j*(N+1) + i. Grid square (i, j) is split along its
/// lower-left to upper-right diagonal into cell 2*(j*N+i) (below the
/// diagonal) and cell 2*(j*N+i)+1 (above). Vertices are counterclockwise.
class Mesh {
 public:
  explicit Mesh(int n_subdiv);

  int n_subdiv() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / n_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t cell_count() const noexcept { return cells_.size(); }

  const Point& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::array<int, 3>& cell(int c) const { return cells_[static_cast<std::size_t>(c)]; }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<std::array<int, 3>>& cells() const noexcept { return cells_; }

  bool is_boundary_node(int i) const;
  int node_index(int i, int j) const noexcept { return j * (n_ + 1) + i; }

  /// Signed area of a cell (positive for every cell of this mesh).
  double cell_area(int c) const;
  std::array<Point, 3> cell_vertices(int c) const;
  /// Affine map from barycentric coordinates of `c` to physical space.
  Point map_to_physical(int c, const Barycentric& bary) const;
  /// Barycentric coordinates of an arbitrary point relative to cell `c`
  /// (may be negative when the point is outside the cell).
  Barycentric barycentric(int c, const Point& p) const;

  /// Closed-form point location. Points on shared edges or vertices resolve
  /// to the lowest containing cell index. Throws DomainError outside [0,1]^2.
  PointLocation locate(const Point& p) const;

  /// Indices of cells whose closure may meet the axis-aligned box.
  void cells_in_box(const Point& lo, const Point& hi, std::vector<int>& out) const;

  /// Unique edges with their one or two adjacent cells.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  void build_edges();

  int n_;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<Edge> edges_;
};

inline Mesh build_structured_mesh(int n_subdiv) { return Mesh(n_subdiv); }

inline PointLocation locate_point(const Mesh& mesh, const Point& p) { return mesh.locate(p); }

}  // namespace nspost
