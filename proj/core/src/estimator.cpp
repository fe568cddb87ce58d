#include "nspost/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "nspost/error.hpp"
#include "nspost/quadrature.hpp"

namespace nspost {

MixedState postprocess(const StokesSolver& fine_solver, const MixedSpace& coarse,
                       const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                       const VectorField& f, double t, bool linear_part, const MeshOverlay& overlay) {
  const MixedSpace& fine = fine_solver.space();
  if (fine.mesh().n_subdiv() < coarse.mesh().n_subdiv()) {
    throw ConfigError("postprocess: the postprocessing mesh must not be coarser than the Galerkin mesh");
  }
  const Eigen::VectorXd rhs =
      assemble_cross_load(fine, coarse, coarse_state, dstar, f, t, linear_part, overlay);
  return fine_solver.solve(rhs, t);
}

MixedState postprocess(const MixedSpace& coarse, const MixedSpace& fine, const MixedState& coarse_state,
                       const Eigen::VectorXd& dstar, double nu, const VectorField& f, double t,
                       bool linear_part) {
  const StokesSolver solver(fine, nu);
  const MeshOverlay overlay(solver.space().mesh_ptr(), coarse.mesh_ptr());
  return postprocess(solver, coarse, coarse_state, dstar, f, t, linear_part, overlay);
}

namespace {

std::optional<double> ratio(double est, double truth) {
  if (!(truth > 1e-13)) return std::nullopt;
  return est / truth;
}

}  // namespace

EstimatorReport estimate(const MixedSpace& coarse, const MixedState& coarse_state, const MixedSpace& fine,
                         const MixedState& postprocessed, const MeshOverlay& overlay,
                         const ManufacturedCase* exact, double t, EstimateOptions options) {
  EstimatorReport r;
  r.h = coarse.mesh().h();
  r.h_fine = fine.mesh().h();
  r.t_star = t;
  const QuadratureRule& qr = rule(10);
  r.estimated = difference_norms(overlay, fine, postprocessed, options.fine_linear, coarse, coarse_state,
                                 options.coarse_linear, qr);
  if (exact) {
    r.true_error = error_norms(coarse, coarse_state, *exact, t, options.coarse_linear);
    r.postprocessed_error = error_norms(fine, postprocessed, *exact, t, options.fine_linear);
    r.theta_vel_L2 = ratio(r.estimated.vel1_L2, r.true_error->vel1_L2);
    r.theta_vel_H1 = ratio(r.estimated.vel1_H1, r.true_error->vel1_H1);
    r.theta_pre = ratio(r.estimated.pre_L2R, r.true_error->pre_L2R);
  }
  return r;
}

ResidualEstimate residual_stokes_estimator(const MixedSpace& space, const MixedState& state,
                                           const VectorField& f, const Eigen::VectorXd& dstar,
                                           double nu, double t) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(10);
  ResidualEstimate out;

  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    const auto verts = mesh.cell_vertices(c);
    const double hT = std::max({(verts[1] - verts[0]).norm(), (verts[2] - verts[1]).norm(),
                                (verts[0] - verts[2]).norm()});
    const auto& g = space.bary_gradients(c);
    const auto dofs = space.cell_velocity_dofs(c);
    // Laplacian of 27 l0 l1 l2 is 54 (l2 g0.g1 + l1 g0.g2 + l0 g1.g2).
    const Eigen::Vector2d gp = pressure_gradient_at(space, state.pressure, c);
    double cell_sq = 0.0;
    double div_sq = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Barycentric& l = qr.points[q];
      const LocalBasis b = eval_basis(space, c, l);
      const Eigen::Vector2d U = velocity_at(space, state.velocity, c, b);
      const Eigen::Matrix2d G = velocity_gradient_at(space, state.velocity, c, b);
      const Eigen::Vector2d D = velocity_at(space, dstar, c, b);
      const double lap_bubble = 54.0 * (l[2] * g[0].dot(g[1]) + l[1] * g[0].dot(g[2]) + l[0] * g[1].dot(g[2]));
      const Eigen::Vector2d lap(state.velocity[dofs[3]] * lap_bubble, state.velocity[dofs[7]] * lap_bubble);
      const Eigen::Vector2d load = f(mesh.map_to_physical(c, l), t) - D - (G * U + 0.5 * G.trace() * U);
      const Eigen::Vector2d R = load + nu * lap - gp;
      cell_sq += qr.weights[q] * R.squaredNorm();
      div_sq += qr.weights[q] * G.trace() * G.trace();
    }
    out.cell_part += hT * hT * area * cell_sq;
    out.divergence_part += nu * nu * area * div_sq;
  }

  const LineRule lr = gauss_legendre(5);
  for (const Edge& e : mesh.edges()) {
    if (e.cells[1] < 0) continue;
    const Point a = mesh.node(e.nodes[0]);
    const Point b = mesh.node(e.nodes[1]);
    const Eigen::Vector2d tangent = b - a;
    const double len = tangent.norm();
    const Eigen::Vector2d normal(tangent.y() / len, -tangent.x() / len);
    double jump_sq = 0.0;
    for (std::size_t q = 0; q < lr.points.size(); ++q) {
      const Point x = a + lr.points[q] * tangent;
      Eigen::Vector2d flux[2];
      for (int side = 0; side < 2; ++side) {
        const int c = e.cells[static_cast<std::size_t>(side)];
        const LocalBasis lb = eval_basis(space, c, mesh.barycentric(c, x));
        flux[side] = nu * velocity_gradient_at(space, state.velocity, c, lb) * normal;
      }
      jump_sq += lr.weights[q] * (flux[0] - flux[1]).squaredNorm();
    }
    out.jump_part += len * len * jump_sq;
  }
  out.eta = std::sqrt(out.cell_part + out.jump_part + out.divergence_part);
  out.vel_H1 = out.eta / nu;
  out.pre = out.eta;
  return out;
}

SeparationAudit temporal_separation_audit(const std::vector<EstimatorReport>& reports) {
  if (reports.size() < 3) {
    throw ConfigError("temporal_separation_audit: need at least three runs at the same h");
  }
  for (const auto& r : reports) {
    if (r.h != reports.front().h || r.h_fine != reports.front().h_fine) {
      throw ConfigError("temporal_separation_audit: runs use different meshes");
    }
    if (!r.true_error) throw ConfigError("temporal_separation_audit: true errors are required");
  }
  auto spread = [&](auto get) {
    double lo = get(reports.front());
    double hi = lo;
    for (const auto& r : reports) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    return std::pair{lo, hi};
  };
  SeparationAudit a;
  a.runs = reports.size();
  const auto rel = [](std::pair<double, double> p) { return (p.second - p.first) / p.first; };
  const auto quot = [](std::pair<double, double> p) { return p.second / p.first; };
  a.spread_vel_L2 = rel(spread([](const EstimatorReport& r) { return r.estimated.vel1_L2; }));
  a.spread_vel_H1 = rel(spread([](const EstimatorReport& r) { return r.estimated.vel1_H1; }));
  a.spread_pre = rel(spread([](const EstimatorReport& r) { return r.estimated.pre_L2R; }));
  a.max_spread = std::max({a.spread_vel_L2, a.spread_vel_H1, a.spread_pre});
  a.true_ratio_vel_L2 = quot(spread([](const EstimatorReport& r) { return r.true_error->vel1_L2; }));
  a.true_ratio_vel_H1 = quot(spread([](const EstimatorReport& r) { return r.true_error->vel1_H1; }));
  a.true_ratio_pre = quot(spread([](const EstimatorReport& r) { return r.true_error->pre_L2R; }));
  return a;
}

}  // namespace nspost
