#include "nspost/stokes.hpp"

#include "nspost/assembly.hpp"
#include "nspost/error.hpp"

namespace nspost {
namespace {

SaddleSystem stokes_system(const StokesOperators& ops) {
  return {ops.stiffness, ops.divergence, ops.mean};
}

}  // namespace

StokesOperators assemble_stokes_operators(const MixedSpace& space, double nu) {
  return {assemble_stiffness(space, nu), assemble_divergence(space), assemble_pressure_mean(space)};
}

StokesSolver::StokesSolver(const MixedSpace& space, double nu)
    : space_(space),
      nu_(nu),
      ops_(assemble_stokes_operators(space, nu)),
      fact_(stokes_system(ops_)) {}

MixedState StokesSolver::solve(const Eigen::VectorXd& velocity_rhs, double time) const {
  const int nv = space_.n_vel();
  const int np = space_.n_pre();
  if (velocity_rhs.size() != nv) throw ConfigError("StokesSolver: rhs length does not match the space");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(fact_.size());
  rhs.head(nv) = velocity_rhs;
  const Eigen::VectorXd x = fact_.solve(rhs);
  return {x.head(nv), x.segment(nv, np), time};
}

MixedState solve_stokes(const StokesProblem& problem) {
  return StokesSolver(problem.space, problem.nu).solve(problem.rhs);
}

MixedState stokes_projection(const MixedSpace& space,
                             const std::function<Eigen::Vector2d(const Point&)>& velocity_laplacian,
                             const std::function<Eigen::Vector2d(const Point&)>& pressure_gradient,
                             double nu) {
  const VectorField g = [&](const Point& x, double) -> Eigen::Vector2d {
    return -nu * velocity_laplacian(x) + pressure_gradient(x);
  };
  return StokesSolver(space, nu).solve(assemble_load(space, g, 0.0));
}

}  // namespace nspost
