#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nspost/assembly.hpp"
#include "nspost/fe_space.hpp"
#include "nspost/manufactured.hpp"
#include "nspost/norms.hpp"
#include "nspost/overlay.hpp"
#include "nspost/stokes.hpp"

namespace nspost {

/// Postprocessed approximation: the Stokes problem on the richer space
///   nu (grad u~, grad phi) + (grad p~, phi) = (f, phi) - b(u, u, phi) - (d_t u, phi)
/// with u, d_t u taken from the coarse Galerkin data (linear part only when
/// `linear_part` is set).
MixedState postprocess(const StokesSolver& fine_solver, const MixedSpace& coarse,
                       const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                       const VectorField& f, double t, bool linear_part, const MeshOverlay& overlay);

MixedState postprocess(const MixedSpace& coarse, const MixedSpace& fine, const MixedState& coarse_state,
                       const Eigen::VectorXd& dstar, double nu, const VectorField& f, double t,
                       bool linear_part = true);

/// Which velocities the estimator compares.
struct EstimateOptions {
  bool coarse_linear = true;  ///< use u_h^l for the Galerkin velocity
  bool fine_linear = true;    ///< use the linear part of the postprocessed velocity
};

struct EstimatorReport {
  double h = 0.0;
  double h_fine = 0.0;
  double k = 0.0;
  std::string scheme;
  double t_star = 0.0;

  /// Norms of (postprocessed - Galerkin).
  ErrorNorms estimated;
  /// Norms of (exact - Galerkin), when an exact solution is known.
  std::optional<ErrorNorms> true_error;
  /// Norms of (exact - postprocessed).
  std::optional<ErrorNorms> postprocessed_error;

  /// Efficiency indexes (estimated / true) for the first velocity component
  /// and the pressure; absent when the true error is below 1e-13.
  std::optional<double> theta_vel_L2;
  std::optional<double> theta_vel_H1;
  std::optional<double> theta_pre;
};

EstimatorReport estimate(const MixedSpace& coarse, const MixedState& coarse_state, const MixedSpace& fine,
                         const MixedState& postprocessed, const MeshOverlay& overlay,
                         const ManufacturedCase* exact, double t, EstimateOptions options = {});

/// Explicit residual estimator for the Stokes problem solved by the
/// Galerkin state:
///   eta^2 = sum_T h_T^2 |R_T|^2 + sum_E h_E |[nu du/dn]|^2 + sum_T nu^2 |div u|^2
/// with R_T = g + nu lap u - grad p and g = f - d_t u - F(u, u).
struct ResidualEstimate {
  double eta = 0.0;
  double cell_part = 0.0;
  double jump_part = 0.0;
  double divergence_part = 0.0;
  double vel_H1 = 0.0;  ///< eta / nu
  double pre = 0.0;     ///< eta
};

ResidualEstimate residual_stokes_estimator(const MixedSpace& space, const MixedState& state,
                                           const VectorField& f, const Eigen::VectorXd& dstar,
                                           double nu, double t);

/// Flatness of the estimates across a time-step sweep at fixed h.
struct SeparationAudit {
  std::size_t runs = 0;
  /// (max - min) / min of the estimated norms, per norm.
  double spread_vel_L2 = 0.0;
  double spread_vel_H1 = 0.0;
  double spread_pre = 0.0;
  double max_spread = 0.0;
  /// max / min of the true errors, per norm.
  double true_ratio_vel_L2 = 0.0;
  double true_ratio_vel_H1 = 0.0;
  double true_ratio_pre = 0.0;
};

SeparationAudit temporal_separation_audit(const std::vector<EstimatorReport>& reports);

}  // namespace nspost
