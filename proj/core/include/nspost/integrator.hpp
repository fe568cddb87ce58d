#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "nspost/assembly.hpp"
#include "nspost/fe_space.hpp"
#include "nspost/sparse.hpp"

namespace nspost {

enum class Scheme { euler, bdf2 };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
  Scheme scheme = Scheme::bdf2;
  double k = 1e-3;
  double t_end = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double nu = 0.05;

  /// Number of fixed steps; throws ConfigError when t_end is not a
  /// multiple of k or parameters are out of range.
  int steps() const;
};

/// Per-step audit of an accepted step.
struct StepReport {
  double time;
  int newton_iterations;
  double residual;       ///< max-norm of the full algebraic residual
  double divergence;     ///< max_q |(div U, psi_q)|
  double pressure_mean;  ///< |integral of P|
};

struct Trajectory {
  Scheme scheme;
  double k;
  /// States in increasing time order (only the last three when the
  /// integration was run with keep_all = false).
  std::vector<MixedState> states;
  std::vector<StepReport> steps;

  const MixedState& final_state() const { return states.back(); }
  /// Scheme difference quotient at the final level (Euler for the first
  /// BDF2 step, matching the bootstrap).
  Eigen::VectorXd final_time_derivative() const;
};

/// Scheme difference quotient of velocity coefficients. `history` runs from
/// oldest to newest; BDF2 needs three levels, Euler two.
Eigen::VectorXd discrete_time_derivative(Scheme scheme, double k,
                                         const std::vector<const Eigen::VectorXd*>& history);

/// Fully implicit Euler / two-step BDF for the spatially discrete
/// Navier-Stokes system, one Newton solve per step.
class NavierStokesIntegrator {
 public:
  NavierStokesIntegrator(const MixedSpace& space, SchemeConfig config);

  const MixedSpace& space() const noexcept { return space_; }
  const SchemeConfig& config() const noexcept { return config_; }

  /// Discrete Leray projection of u0 (constrained L2 projection).
  MixedState initial_state(const VectorField& u0) const;

  /// Advance to `t_new`. `history` is oldest to newest; a single level
  /// gives an Euler step, two levels a BDF2 step (when configured).
  MixedState step(const std::vector<const MixedState*>& history, const VectorField& f, double t_new,
                  StepReport* report = nullptr);

  Trajectory integrate(const VectorField& u0, const VectorField& f, bool keep_all = true);

  /// Full algebraic residual (velocity rows, pressure rows, constraint row)
  /// of the scheme equations for `candidate` given `history`.
  Eigen::VectorXd scheme_residual(const std::vector<const MixedState*>& history,
                                  const MixedState& candidate, const Eigen::VectorXd& load,
                                  double multiplier = 0.0) const;

 private:
  struct Coefficients {
    double alpha;
    Eigen::VectorXd history_term;
  };
  Coefficients coefficients(const std::vector<const MixedState*>& history) const;

  MixedSpace space_;
  SchemeConfig config_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  SparseMatrix divergence_;
  Eigen::VectorXd mean_;
  std::unique_ptr<SaddleFactorization> newton_fact_;
};

MixedState initial_state(const MixedSpace& space, const VectorField& u0);

Trajectory integrate(const MixedSpace& space, const SchemeConfig& config, const VectorField& u0,
                     const VectorField& f, bool keep_all = true);

}  // namespace nspost
