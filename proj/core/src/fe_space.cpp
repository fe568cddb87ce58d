#include "nspost/fe_space.hpp"

#include <string>

#include "nspost/error.hpp"

namespace nspost {

MixedSpace::MixedSpace(std::shared_ptr<const Mesh> mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw ConfigError("MixedSpace: null mesh");
  const auto nn = mesh_->node_count();
  node_dof_.assign(nn, kNoDof);
  for (std::size_t i = 0; i < nn; ++i) {
    if (!mesh_->is_boundary_node(static_cast<int>(i))) node_dof_[i] = n_interior_++;
  }
  n_component_ = n_interior_ + static_cast<int>(mesh_->cell_count());

  bary_grad_.resize(mesh_->cell_count());
  for (int c = 0; c < static_cast<int>(mesh_->cell_count()); ++c) {
    const auto [a, b, d] = mesh_->cell_vertices(c);
    const Point e1 = b - a;
    const Point e2 = d - a;
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    // Rows of the inverse Jacobian are the gradients of l1 and l2.
    const Eigen::Vector2d g1(e2.y() / det, -e2.x() / det);
    const Eigen::Vector2d g2(-e1.y() / det, e1.x() / det);
    bary_grad_[static_cast<std::size_t>(c)] = {-g1 - g2, g1, g2};
  }
}

std::array<int, 8> MixedSpace::cell_velocity_dofs(int cell) const {
  const auto& v = mesh_->cell(cell);
  std::array<int, 8> dofs{};
  for (int comp = 0; comp < 2; ++comp) {
    for (int k = 0; k < 3; ++k) dofs[static_cast<std::size_t>(4 * comp + k)] = node_dof(v[static_cast<std::size_t>(k)], comp);
    dofs[static_cast<std::size_t>(4 * comp + 3)] = bubble_dof(cell, comp);
  }
  return dofs;
}

MixedState MixedSpace::zero_state(double time) const {
  return {Eigen::VectorXd::Zero(n_vel()), Eigen::VectorXd::Zero(n_pre()), time};
}

MixedSpace build_mini_space(std::shared_ptr<const Mesh> mesh) { return MixedSpace(std::move(mesh)); }

LocalBasis eval_basis(const MixedSpace& space, int cell, const Barycentric& l) {
  const auto& g = space.bary_gradients(cell);
  LocalBasis out;
  out.value = {l[0], l[1], l[2], 27.0 * l[0] * l[1] * l[2]};
  out.grad = {g[0], g[1], g[2],
              27.0 * (l[1] * l[2] * g[0] + l[0] * l[2] * g[1] + l[0] * l[1] * g[2])};
  return out;
}

Eigen::Vector2d velocity_at(const MixedSpace& space, const Eigen::VectorXd& velocity, int cell,
                            const LocalBasis& basis, bool linear_part) {
  const auto dofs = space.cell_velocity_dofs(cell);
  const int nloc = linear_part ? 3 : 4;
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  for (int comp = 0; comp < 2; ++comp) {
    for (int k = 0; k < nloc; ++k) {
      const int d = dofs[static_cast<std::size_t>(4 * comp + k)];
      if (d != kNoDof) u[comp] += velocity[d] * basis.value[static_cast<std::size_t>(k)];
    }
  }
  return u;
}

Eigen::Matrix2d velocity_gradient_at(const MixedSpace& space, const Eigen::VectorXd& velocity,
                                     int cell, const LocalBasis& basis, bool linear_part) {
  const auto dofs = space.cell_velocity_dofs(cell);
  const int nloc = linear_part ? 3 : 4;
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  for (int comp = 0; comp < 2; ++comp) {
    for (int k = 0; k < nloc; ++k) {
      const int d = dofs[static_cast<std::size_t>(4 * comp + k)];
      if (d != kNoDof) g.row(comp) += velocity[d] * basis.grad[static_cast<std::size_t>(k)].transpose();
    }
  }
  return g;
}

double pressure_at(const MixedSpace& space, const Eigen::VectorXd& pressure, int cell,
                   const Barycentric& bary) {
  const auto dofs = space.cell_pressure_dofs(cell);
  return pressure[dofs[0]] * bary[0] + pressure[dofs[1]] * bary[1] + pressure[dofs[2]] * bary[2];
}

Eigen::Vector2d pressure_gradient_at(const MixedSpace& space, const Eigen::VectorXd& pressure,
                                     int cell) {
  const auto dofs = space.cell_pressure_dofs(cell);
  const auto& g = space.bary_gradients(cell);
  return pressure[dofs[0]] * g[0] + pressure[dofs[1]] * g[1] + pressure[dofs[2]] * g[2];
}

std::vector<double> evaluate_field(const MixedSpace& space, const MixedState& state,
                                   const Point& point, FieldKind which, Derivative derivative,
                                   bool linear_part) {
  if (state.velocity.size() != space.n_vel() || state.pressure.size() != space.n_pre()) {
    throw ConfigError("evaluate_field: state does not match the space");
  }
  const PointLocation loc = space.mesh().locate(point);
  if (which == FieldKind::pressure) {
    if (derivative == Derivative::value) return {pressure_at(space, state.pressure, loc.cell, loc.bary)};
    const Eigen::Vector2d g = pressure_gradient_at(space, state.pressure, loc.cell);
    return {g.x(), g.y()};
  }
  const LocalBasis basis = eval_basis(space, loc.cell, loc.bary);
  if (derivative == Derivative::value) {
    const Eigen::Vector2d u = velocity_at(space, state.velocity, loc.cell, basis, linear_part);
    return {u.x(), u.y()};
  }
  const Eigen::Matrix2d g = velocity_gradient_at(space, state.velocity, loc.cell, basis, linear_part);
  return {g(0, 0), g(0, 1), g(1, 0), g(1, 1)};
}

}  // namespace nspost
