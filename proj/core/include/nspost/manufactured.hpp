#pragma once

#include <numbers>
#include <string_view>

#include <Eigen/Core>

#include "nspost/assembly.hpp"
#include "nspost/fe_space.hpp"
#include "nspost/norms.hpp"

namespace nspost {

/// Temporal profile of the manufactured solution.
enum class TimeProfile {
  linear,  ///< phi(t) = t
  sine,    ///< phi(t) = sin((2 pi + pi/2) t)
};

std::string_view to_string(TimeProfile p);
TimeProfile parse_profile(std::string_view name);

/// Pointwise exact data at (x, y, t).
struct ExactValues {
  Eigen::Vector2d velocity;
  Eigen::Matrix2d velocity_gradient;  ///< G(i, j) = d u_i / d x_j
  Eigen::Vector2d velocity_laplacian;
  Eigen::Vector2d velocity_dt;
  double pressure;
  double pressure_mean_adjusted;  ///< p minus its mean over the unit square
  Eigen::Vector2d pressure_gradient;
};

/// Divergence-free solution on the unit square vanishing on the boundary:
///   u1 =  2 pi phi(t) sin^2(pi x) sin(pi y) cos(pi y)
///   u2 = -2 pi phi(t) sin^2(pi y) sin(pi x) cos(pi x)
///   p  = 20 phi(t) x^2 y
/// with the forcing that makes it solve the Navier-Stokes equations.
class ManufacturedCase {
 public:
  static constexpr double kSineFrequency = 2.0 * std::numbers::pi + 0.5 * std::numbers::pi;

  ManufacturedCase(TimeProfile profile, double nu);

  TimeProfile profile() const noexcept { return profile_; }
  double nu() const noexcept { return nu_; }

  double phi(double t) const;
  double phi_dt(double t) const;

  ExactValues exact(double x, double y, double t) const;
  /// f = u_t - nu lap u + (u . grad) u + grad p.
  Eigen::Vector2d forcing(double x, double y, double t) const;
  double pressure_mean(double t) const { return 10.0 / 3.0 * phi(t); }

  VectorField forcing_field() const;
  VectorField velocity_field() const;
  /// Reference fields at a fixed time (mean-adjusted pressure).
  ReferenceFields reference(double t) const;

 private:
  TimeProfile profile_;
  double nu_;
};

inline ExactValues exact(const ManufacturedCase& c, double x, double y, double t) { return c.exact(x, y, t); }
inline Eigen::Vector2d forcing(const ManufacturedCase& c, double x, double y, double t) {
  return c.forcing(x, y, t);
}

/// Errors of a discrete state against the exact solution at time t.
ErrorNorms error_norms(const MixedSpace& space, const MixedState& state, const ManufacturedCase& c,
                       double t, bool use_linear_part, int degree = 10);

}  // namespace nspost
