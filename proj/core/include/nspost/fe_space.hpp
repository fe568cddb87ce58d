#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "nspost/mesh.hpp"

namespace nspost {

/// Coefficient vectors of a velocity/pressure pair at one time level.
struct MixedState {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  double time = 0.0;
};

/// Local mini-element basis on one cell: indices 0..2 are the P1 hat
/// functions (the barycentric coordinates), index 3 is the cubic bubble
/// 27*l0*l1*l2.
struct LocalBasis {
  std::array<double, 4> value;
  std::array<Eigen::Vector2d, 4> grad;
};

inline constexpr int kNoDof = -1;

/// Mini-element pair on a structured mesh: continuous P1 + cell bubble per
/// velocity component with homogeneous Dirichlet data, continuous P1
/// pressure on every node (mean fixed at solve time).
///
/// Velocity numbering: component 0 block then component 1 block; inside a
/// block, interior nodes in lexicographic order followed by one bubble per
/// cell in cell order. Pressure DOF i is node i.
class MixedSpace {
 public:
  explicit MixedSpace(std::shared_ptr<const Mesh> mesh);

  const Mesh& mesh() const noexcept { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const noexcept { return mesh_; }

  int n_vel() const noexcept { return 2 * n_component_; }
  int n_pre() const noexcept { return static_cast<int>(mesh_->node_count()); }
  int n_component() const noexcept { return n_component_; }
  int n_interior_nodes() const noexcept { return n_interior_; }

  /// Velocity DOF of a node for one component, or kNoDof on the boundary.
  int node_dof(int node, int component) const {
    const int d = node_dof_[static_cast<std::size_t>(node)];
    return d == kNoDof ? kNoDof : component * n_component_ + d;
  }
  int bubble_dof(int cell, int component) const {
    return component * n_component_ + n_interior_ + cell;
  }
  /// True if velocity DOF `dof` belongs to a bubble.
  bool is_bubble_dof(int dof) const { return dof % n_component_ >= n_interior_; }

  /// Local velocity DOFs of a cell: [c0: v0 v1 v2 bubble, c1: v0 v1 v2 bubble].
  std::array<int, 8> cell_velocity_dofs(int cell) const;
  std::array<int, 3> cell_pressure_dofs(int cell) const { return mesh_->cell(cell); }

  /// Constant physical gradients of the barycentric coordinates on a cell.
  const std::array<Eigen::Vector2d, 3>& bary_gradients(int cell) const {
    return bary_grad_[static_cast<std::size_t>(cell)];
  }

  MixedState zero_state(double time = 0.0) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  int n_interior_ = 0;
  int n_component_ = 0;
  std::vector<int> node_dof_;
  std::vector<std::array<Eigen::Vector2d, 3>> bary_grad_;
};

MixedSpace build_mini_space(std::shared_ptr<const Mesh> mesh);

/// Basis values and physical gradients at barycentric point `bary` of `cell`.
LocalBasis eval_basis(const MixedSpace& space, int cell, const Barycentric& bary);

/// Velocity with the bubble contribution optionally dropped (the linear part).
Eigen::Vector2d velocity_at(const MixedSpace& space, const Eigen::VectorXd& velocity, int cell,
                            const LocalBasis& basis, bool linear_part = false);
/// Velocity Jacobian G(i, j) = d u_i / d x_j.
Eigen::Matrix2d velocity_gradient_at(const MixedSpace& space, const Eigen::VectorXd& velocity,
                                     int cell, const LocalBasis& basis, bool linear_part = false);
double pressure_at(const MixedSpace& space, const Eigen::VectorXd& pressure, int cell,
                   const Barycentric& bary);
Eigen::Vector2d pressure_gradient_at(const MixedSpace& space, const Eigen::VectorXd& pressure,
                                     int cell);

enum class FieldKind { velocity, pressure };
enum class Derivative { value, gradient };

/// Point evaluation of a discrete field anywhere in the closed unit square.
/// Velocity value: (u1, u2). Velocity gradient: (du1/dx, du1/dy, du2/dx,
/// du2/dy). Pressure value: (p). Pressure gradient: (dp/dx, dp/dy).
/// `linear_part` drops bubble coefficients (velocity only).
std::vector<double> evaluate_field(const MixedSpace& space, const MixedState& state,
                                   const Point& point, FieldKind which, Derivative derivative,
                                   bool linear_part = false);

}  // namespace nspost
