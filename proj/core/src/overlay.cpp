#include "nspost/overlay.hpp"

#include <algorithm>
#include <cmath>

#include "nspost/error.hpp"

namespace nspost {
namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

}  // namespace

std::vector<Point> clip_to_triangle(std::vector<Point> polygon, const std::array<Point, 3>& tri) {
  std::vector<Point> out;
  for (int e = 0; e < 3 && !polygon.empty(); ++e) {
    const Point& a = tri[static_cast<std::size_t>(e)];
    const Point edge = tri[static_cast<std::size_t>((e + 1) % 3)] - a;
    out.clear();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
      const Point& p = polygon[i];
      const Point& q = polygon[(i + 1) % polygon.size()];
      const double sp = cross(edge, p - a);
      const double sq = cross(edge, q - a);
      if (sq >= 0.0) {
        if (sp < 0.0) out.push_back(p + (sp / (sp - sq)) * (q - p));
        out.push_back(q);
      } else if (sp >= 0.0) {
        out.push_back(p + (sp / (sp - sq)) * (q - p));
      }
    }
    polygon.swap(out);
  }
  return polygon;
}

MeshOverlay::MeshOverlay(std::shared_ptr<const Mesh> fine, std::shared_ptr<const Mesh> coarse)
    : fine_(std::move(fine)), coarse_(std::move(coarse)) {
  if (!fine_ || !coarse_) throw ConfigError("MeshOverlay: null mesh");
  std::vector<int> candidates;
  for (int fc = 0; fc < static_cast<int>(fine_->cell_count()); ++fc) {
    const auto verts = fine_->cell_vertices(fc);
    const double fine_area = fine_->cell_area(fc);
    Point lo = verts[0].cwiseMin(verts[1]).cwiseMin(verts[2]);
    Point hi = verts[0].cwiseMax(verts[1]).cwiseMax(verts[2]);
    coarse_->cells_in_box(lo, hi, candidates);
    for (int cc : candidates) {
      const std::vector<Point> poly =
          clip_to_triangle({verts[0], verts[1], verts[2]}, coarse_->cell_vertices(cc));
      if (poly.size() < 3) continue;
      if (polygon_area(poly) <= 1e-13 * fine_area) continue;
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        Piece pc{fc, cc, {poly[0], poly[k], poly[k + 1]}, 0.0};
        pc.area = 0.5 * cross(poly[k] - poly[0], poly[k + 1] - poly[0]);
        if (pc.area > 1e-15 * fine_area) pieces_.push_back(pc);
      }
    }
  }
}

}  // namespace nspost
