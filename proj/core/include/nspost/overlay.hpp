#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nspost/mesh.hpp"
#include "nspost/quadrature.hpp"

namespace nspost {

/// Common refinement of two triangulations of the unit square: every fine
/// cell is clipped against the coarse cells it overlaps and each convex
/// intersection is fanned into triangles. Both fields are polynomial on
/// each piece, so a fixed rule on the pieces integrates cross-mesh
/// products without the error of straddling a coarse edge.
class MeshOverlay {
 public:
  struct Piece {
    int fine_cell;
    int coarse_cell;
    std::array<Point, 3> triangle;
    double area;
  };

  MeshOverlay(std::shared_ptr<const Mesh> fine, std::shared_ptr<const Mesh> coarse);

  const Mesh& fine() const noexcept { return *fine_; }
  const Mesh& coarse() const noexcept { return *coarse_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }

  /// Calls fn(fine_cell, fine_bary, coarse_cell, coarse_bary, weight) for
  /// every quadrature point of every piece; `weight` includes the area.
  template <typename Fn>
  void visit(const QuadratureRule& rule, Fn&& fn) const {
    for (const Piece& pc : pieces_) {
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Barycentric& l = rule.points[q];
        const Point x = l[0] * pc.triangle[0] + l[1] * pc.triangle[1] + l[2] * pc.triangle[2];
        fn(pc.fine_cell, fine_->barycentric(pc.fine_cell, x), pc.coarse_cell,
           coarse_->barycentric(pc.coarse_cell, x), rule.weights[q] * pc.area);
      }
    }
  }

 private:
  std::shared_ptr<const Mesh> fine_;
  std::shared_ptr<const Mesh> coarse_;
  std::vector<Piece> pieces_;
};

/// Convex polygon clipped to a counterclockwise triangle.
std::vector<Point> clip_to_triangle(std::vector<Point> polygon, const std::array<Point, 3>& tri);

}  // namespace nspost
