#pragma once

#include <functional>

#include <Eigen/Core>

#include "nspost/fe_space.hpp"
#include "nspost/sparse.hpp"

namespace nspost {

/// Velocity-pressure operators of one (space, nu) pair.
struct StokesOperators {
  SparseMatrix stiffness;   ///< nu * (grad phi_j, grad phi_i)
  SparseMatrix divergence;  ///< (psi_q, div phi_v)
  Eigen::VectorXd mean;     ///< integrals of the pressure basis
};

StokesOperators assemble_stokes_operators(const MixedSpace& space, double nu);

/// Steady Stokes problem nu (grad u, grad phi) + (grad p, phi) = (rhs, phi),
/// (div u, psi) = 0 with mean-zero pressure.
struct StokesProblem {
  const MixedSpace& space;
  double nu;
  Eigen::VectorXd rhs;
};

/// Caches the factorization for one (space, nu) pair; every call to solve()
/// reuses it. Safe for concurrent solve() calls.
class StokesSolver {
 public:
  StokesSolver(const MixedSpace& space, double nu);

  const MixedSpace& space() const noexcept { return space_; }
  double nu() const noexcept { return nu_; }
  const StokesOperators& operators() const noexcept { return ops_; }

  MixedState solve(const Eigen::VectorXd& velocity_rhs, double time = 0.0) const;

 private:
  MixedSpace space_;
  double nu_;
  StokesOperators ops_;
  SaddleFactorization fact_;
};

MixedState solve_stokes(const StokesProblem& problem);

/// Discrete Stokes projection of an exact pair: the load is
/// g = -nu * laplacian(u) + grad(p).
MixedState stokes_projection(const MixedSpace& space,
                             const std::function<Eigen::Vector2d(const Point&)>& velocity_laplacian,
                             const std::function<Eigen::Vector2d(const Point&)>& pressure_gradient,
                             double nu);

}  // namespace nspost
