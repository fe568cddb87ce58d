#include "nspost/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "nspost/error.hpp"

namespace nspost {

Mesh::Mesh(int n_subdiv) : n_(n_subdiv) {
  if (n_subdiv < 1) {
    throw ConfigError("build_structured_mesh: n_subdiv must be >= 1, got " +
                      std::to_string(n_subdiv));
  }
  const int np = n_ + 1;
  nodes_.reserve(static_cast<std::size_t>(np * np));
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < np; ++i) {
      nodes_.emplace_back(static_cast<double>(i) / n_, static_cast<double>(j) / n_);
    }
  }
  cells_.reserve(static_cast<std::size_t>(2 * n_ * n_));
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) {
      const int sw = node_index(i, j);
      const int se = node_index(i + 1, j);
      const int ne = node_index(i + 1, j + 1);
      const int nw = node_index(i, j + 1);
      cells_.push_back({sw, se, ne});
      cells_.push_back({sw, ne, nw});
    }
  }
  build_edges();
}

bool Mesh::is_boundary_node(int idx) const {
  const int i = idx % (n_ + 1);
  const int j = idx / (n_ + 1);
  return i == 0 || j == 0 || i == n_ || j == n_;
}

std::array<Point, 3> Mesh::cell_vertices(int c) const {
  const auto& v = cell(c);
  return {node(v[0]), node(v[1]), node(v[2])};
}

double Mesh::cell_area(int c) const {
  const auto [a, b, d] = cell_vertices(c);
  const Point e1 = b - a;
  const Point e2 = d - a;
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Point Mesh::map_to_physical(int c, const Barycentric& bary) const {
  const auto [a, b, d] = cell_vertices(c);
  return bary[0] * a + bary[1] * b + bary[2] * d;
}

Barycentric Mesh::barycentric(int c, const Point& p) const {
  const auto [a, b, d] = cell_vertices(c);
  const Point e1 = b - a;
  const Point e2 = d - a;
  const Point r = p - a;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();
  const double l1 = (r.x() * e2.y() - r.y() * e2.x()) / det;
  const double l2 = (e1.x() * r.y() - e1.y() * r.x()) / det;
  return {1.0 - l1 - l2, l1, l2};
}

PointLocation Mesh::locate(const Point& p) const {
  if (!(p.x() >= 0.0 && p.x() <= 1.0 && p.y() >= 0.0 && p.y() <= 1.0)) {
    throw DomainError("locate_point: point outside the unit square");
  }
  // Grid squares whose closure contains p: at most two per axis.
  auto candidates = [this](double s, std::array<int, 2>& out) {
    const double scaled = s * n_;
    int k = std::min(static_cast<int>(std::floor(scaled)), n_ - 1);
    int count = 0;
    if (k > 0 && scaled == static_cast<double>(k)) out[count++] = k - 1;
    out[count++] = k;
    return count;
  };
  std::array<int, 2> ix{};
  std::array<int, 2> jy{};
  const int nx = candidates(p.x(), ix);
  const int ny = candidates(p.y(), jy);

  std::array<int, 8> cand{};
  int nc = 0;
  for (int b = 0; b < ny; ++b) {
    for (int a = 0; a < nx; ++a) {
      const int sq = jy[b] * n_ + ix[a];
      cand[nc++] = 2 * sq;
      cand[nc++] = 2 * sq + 1;
    }
  }
  std::sort(cand.begin(), cand.begin() + nc);

  constexpr double kTol = 1e-12;
  int best = -1;
  Barycentric best_bary{};
  double best_min = -1e300;
  for (int q = 0; q < nc; ++q) {
    const Barycentric bary = barycentric(cand[q], p);
    const double m = std::min({bary[0], bary[1], bary[2]});
    if (m >= -kTol) {
      best = cand[q];
      best_bary = bary;
      break;
    }
    if (m > best_min) {
      best_min = m;
      best = cand[q];
      best_bary = bary;
    }
  }
  double sum = 0.0;
  for (double& l : best_bary) {
    l = std::max(l, 0.0);
    sum += l;
  }
  for (double& l : best_bary) l /= sum;
  return {best, best_bary};
}

void Mesh::cells_in_box(const Point& lo, const Point& hi, std::vector<int>& out) const {
  out.clear();
  constexpr double kPad = 1e-12;
  auto clamp_index = [this](double s) {
    return std::clamp(static_cast<int>(std::floor(s * n_)), 0, n_ - 1);
  };
  const int i0 = clamp_index(lo.x() - kPad);
  const int i1 = clamp_index(hi.x() + kPad);
  const int j0 = clamp_index(lo.y() - kPad);
  const int j1 = clamp_index(hi.y() + kPad);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      out.push_back(2 * (j * n_ + i));
      out.push_back(2 * (j * n_ + i) + 1);
    }
  }
}

void Mesh::build_edges() {
  std::map<std::pair<int, int>, std::size_t> index;
  for (int c = 0; c < static_cast<int>(cells_.size()); ++c) {
    const auto& v = cells_[static_cast<std::size_t>(c)];
    for (int e = 0; e < 3; ++e) {
      int a = v[static_cast<std::size_t>(e)];
      int b = v[static_cast<std::size_t>((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      auto [it, fresh] = index.try_emplace({a, b}, edges_.size());
      if (fresh) {
        edges_.push_back({{a, b}, {c, -1}});
      } else {
        edges_[it->second].cells[1] = c;
      }
    }
  }
}

}  // namespace nspost
