#include "nspost/norms.hpp"

#include <algorithm>
#include <cmath>

#include "nspost/error.hpp"

namespace nspost {
namespace {

struct Accumulator {
  double l2[2] = {0.0, 0.0};
  double semi[2] = {0.0, 0.0};
  double p2 = 0.0;
  double p1 = 0.0;

  void add(double w, const Eigen::Vector2d& du, const Eigen::Matrix2d& dg, double dp) {
    for (int m = 0; m < 2; ++m) {
      l2[m] += w * du[m] * du[m];
      semi[m] += w * dg.row(m).squaredNorm();
    }
    p2 += w * dp * dp;
    p1 += w * dp;
  }

  ErrorNorms finish() const {
    ErrorNorms n;
    n.vel1_L2 = std::sqrt(l2[0]);
    n.vel2_L2 = std::sqrt(l2[1]);
    n.vel1_H1 = std::sqrt(l2[0] + semi[0]);
    n.vel2_H1 = std::sqrt(l2[1] + semi[1]);
    n.vel_L2 = std::sqrt(l2[0] + l2[1]);
    n.vel_H1 = std::sqrt(l2[0] + l2[1] + semi[0] + semi[1]);
    // Unit-area domain: inf_c ||e + c||^2 = ||e||^2 - (int e)^2.
    n.pre_L2R = std::sqrt(std::max(0.0, p2 - p1 * p1));
    return n;
  }
};

}  // namespace

ErrorNorms field_error_norms(const MixedSpace& space, const MixedState& state,
                             const ReferenceFields& ref, bool linear_part, const QuadratureRule& qr) {
  if (state.velocity.size() != space.n_vel() || state.pressure.size() != space.n_pre()) {
    throw ConfigError("error norms: state does not match the space");
  }
  const Mesh& mesh = space.mesh();
  Accumulator acc;
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Barycentric& l = qr.points[q];
      const Point x = mesh.map_to_physical(c, l);
      const LocalBasis b = eval_basis(space, c, l);
      const Eigen::Vector2d du = ref.velocity(x) - velocity_at(space, state.velocity, c, b, linear_part);
      const Eigen::Matrix2d dg =
          ref.velocity_gradient(x) - velocity_gradient_at(space, state.velocity, c, b, linear_part);
      const double dp = ref.pressure(x) - pressure_at(space, state.pressure, c, l);
      acc.add(qr.weights[q] * area, du, dg, dp);
    }
  }
  return acc.finish();
}

ErrorNorms difference_norms(const MeshOverlay& overlay, const MixedSpace& fine,
                            const MixedState& fine_state, bool fine_linear,
                            const MixedSpace& coarse, const MixedState& coarse_state,
                            bool coarse_linear, const QuadratureRule& qr) {
  if (&overlay.fine() != &fine.mesh() || &overlay.coarse() != &coarse.mesh()) {
    throw ConfigError("difference_norms: overlay built for different meshes");
  }
  Accumulator acc;
  overlay.visit(qr, [&](int fc, const Barycentric& fl, int cc, const Barycentric& cl, double w) {
    const LocalBasis fb = eval_basis(fine, fc, fl);
    const LocalBasis cb = eval_basis(coarse, cc, cl);
    const Eigen::Vector2d du = velocity_at(fine, fine_state.velocity, fc, fb, fine_linear) -
                               velocity_at(coarse, coarse_state.velocity, cc, cb, coarse_linear);
    const Eigen::Matrix2d dg = velocity_gradient_at(fine, fine_state.velocity, fc, fb, fine_linear) -
                               velocity_gradient_at(coarse, coarse_state.velocity, cc, cb, coarse_linear);
    const double dp = pressure_at(fine, fine_state.pressure, fc, fl) -
                      pressure_at(coarse, coarse_state.pressure, cc, cl);
    acc.add(w, du, dg, dp);
  });
  return acc.finish();
}

}  // namespace nspost
