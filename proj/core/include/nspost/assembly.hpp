#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "nspost/fe_space.hpp"
#include "nspost/overlay.hpp"
#include "nspost/sparse.hpp"

namespace nspost {

/// Time-dependent vector field f(x, t).
using VectorField = std::function<Eigen::Vector2d(const Point&, double)>;

/// Quadrature degrees used by the assembly routines.
inline constexpr int kAssemblyDegree = 6;
inline constexpr int kConvectionDegree = 10;
inline constexpr int kLoadDegree = 10;

/// nu * (grad phi_j, grad phi_i) on the velocity space.
SparseMatrix assemble_stiffness(const MixedSpace& space, double nu);
/// (phi_j, phi_i) on the velocity space.
SparseMatrix assemble_mass(const MixedSpace& space);
/// (psi_q, div phi_v): n_pre rows, n_vel columns.
SparseMatrix assemble_divergence(const MixedSpace& space);
/// Integrals of the pressure basis functions (entries sum to |Omega| = 1).
Eigen::VectorXd assemble_pressure_mean(const MixedSpace& space);

/// Convection in skew-symmetric form F(u, v) = (u . grad) v + 1/2 (div u) v.
struct ConvectionData {
  /// b(u, u, phi_i) for every velocity test function.
  Eigen::VectorXd vector;
  /// Derivative of u -> b(u, u, .) at the advecting state. The pattern
  /// contains every local pair of each cell (explicit zeros included), so it
  /// does not depend on the state.
  std::optional<SparseMatrix> jacobian;
};

ConvectionData assemble_convection(const MixedSpace& space, const Eigen::VectorXd& advecting,
                                   bool with_jacobian = false);

/// b(u, v, w) = ((u . grad) v + 1/2 (div u) v, w).
double trilinear_form(const MixedSpace& space, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                      const Eigen::VectorXd& w);

/// (f(t), phi_i).
Eigen::VectorXd assemble_load(const MixedSpace& space, const VectorField& f, double t);

/// Right-hand side of the postprocessing Stokes problem on `fine`:
///   (f, phi) - (F(u, u), phi) - (d_t u, phi)
/// where u and d_t u live on `coarse` (given as the coarse state and its
/// discrete time derivative). `linear_part` drops the coarse bubbles.
/// Coarse fields are integrated on the exact overlay of both meshes.
Eigen::VectorXd assemble_cross_load(const MixedSpace& fine, const MixedSpace& coarse,
                                    const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                                    const VectorField& f, double t, bool linear_part,
                                    const MeshOverlay& overlay);

/// Convenience overload building the overlay on the fly.
Eigen::VectorXd assemble_cross_load(const MixedSpace& fine, const MixedSpace& coarse,
                                    const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                                    const VectorField& f, double t, bool linear_part = true);

}  // namespace nspost
