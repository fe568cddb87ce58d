#pragma once

#include <functional>

#include <Eigen/Core>

#include "nspost/fe_space.hpp"
#include "nspost/overlay.hpp"
#include "nspost/quadrature.hpp"

namespace nspost {

/// Velocity norms per component and combined, plus the pressure quotient
/// norm inf_c ||p + c||_0. "H1" is the full norm (L2 plus seminorm).
struct ErrorNorms {
  double vel1_L2 = 0.0;
  double vel1_H1 = 0.0;
  double vel2_L2 = 0.0;
  double vel2_H1 = 0.0;
  double vel_L2 = 0.0;
  double vel_H1 = 0.0;
  double pre_L2R = 0.0;
};

/// Pointwise reference fields for error measurement.
struct ReferenceFields {
  std::function<Eigen::Vector2d(const Point&)> velocity;
  std::function<Eigen::Matrix2d(const Point&)> velocity_gradient;
  std::function<double(const Point&)> pressure;
};

/// Norms of (reference - discrete) integrated cell by cell with `qr`.
ErrorNorms field_error_norms(const MixedSpace& space, const MixedState& state,
                             const ReferenceFields& reference, bool linear_part,
                             const QuadratureRule& qr);

/// Norms of (fine - coarse) integrated on the overlay of the two meshes.
ErrorNorms difference_norms(const MeshOverlay& overlay, const MixedSpace& fine,
                            const MixedState& fine_state, bool fine_linear,
                            const MixedSpace& coarse, const MixedState& coarse_state,
                            bool coarse_linear, const QuadratureRule& qr);

}  // namespace nspost
