#include "nspost/assembly.hpp"

#include "nspost/error.hpp"
#include "nspost/quadrature.hpp"

namespace nspost {
namespace {

using Local4 = Eigen::Matrix4d;

template <typename Kernel>
SparseMatrix assemble_componentwise(const MixedSpace& space, int degree, Kernel&& kernel) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(degree);
  TripletAccumulator acc(space.n_vel(), space.n_vel());
  acc.reserve(mesh.cell_count() * 32);
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    Local4 local = Local4::Zero();
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const LocalBasis b = eval_basis(space, c, qr.points[q]);
      const double w = qr.weights[q] * area;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) local(i, j) += w * kernel(b, i, j);
      }
    }
    const auto dofs = space.cell_velocity_dofs(c);
    for (int comp = 0; comp < 2; ++comp) {
      for (int i = 0; i < 4; ++i) {
        const int di = dofs[static_cast<std::size_t>(4 * comp + i)];
        if (di == kNoDof) continue;
        for (int j = 0; j < 4; ++j) {
          const int dj = dofs[static_cast<std::size_t>(4 * comp + j)];
          if (dj != kNoDof) acc.add(di, dj, local(i, j));
        }
      }
    }
  }
  return acc.finalize();
}

void check_velocity(const MixedSpace& space, const Eigen::VectorXd& v, const char* what) {
  if (v.size() != space.n_vel()) {
    throw ConfigError(std::string(what) + ": velocity vector length does not match the space");
  }
}

}  // namespace

SparseMatrix assemble_stiffness(const MixedSpace& space, double nu) {
  if (!(nu > 0.0)) throw ConfigError("assemble_stiffness: viscosity must be positive");
  return assemble_componentwise(space, kAssemblyDegree, [nu](const LocalBasis& b, int i, int j) {
    return nu * b.grad[static_cast<std::size_t>(j)].dot(b.grad[static_cast<std::size_t>(i)]);
  });
}

SparseMatrix assemble_mass(const MixedSpace& space) {
  return assemble_componentwise(space, kAssemblyDegree, [](const LocalBasis& b, int i, int j) {
    return b.value[static_cast<std::size_t>(j)] * b.value[static_cast<std::size_t>(i)];
  });
}

SparseMatrix assemble_divergence(const MixedSpace& space) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(kAssemblyDegree);
  TripletAccumulator acc(space.n_pre(), space.n_vel());
  acc.reserve(mesh.cell_count() * 24);
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    Eigen::Matrix<double, 3, 8> local = Eigen::Matrix<double, 3, 8>::Zero();
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Barycentric& l = qr.points[q];
      const LocalBasis b = eval_basis(space, c, l);
      const double w = qr.weights[q] * area;
      for (int a = 0; a < 3; ++a) {
        for (int comp = 0; comp < 2; ++comp) {
          for (int j = 0; j < 4; ++j) {
            local(a, 4 * comp + j) += w * l[static_cast<std::size_t>(a)] * b.grad[static_cast<std::size_t>(j)][comp];
          }
        }
      }
    }
    const auto vd = space.cell_velocity_dofs(c);
    const auto pd = space.cell_pressure_dofs(c);
    for (int a = 0; a < 3; ++a) {
      for (int j = 0; j < 8; ++j) {
        if (vd[static_cast<std::size_t>(j)] != kNoDof) acc.add(pd[static_cast<std::size_t>(a)], vd[static_cast<std::size_t>(j)], local(a, j));
      }
    }
  }
  return acc.finalize();
}

Eigen::VectorXd assemble_pressure_mean(const MixedSpace& space) {
  const Mesh& mesh = space.mesh();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.n_pre());
  for (int cell = 0; cell < static_cast<int>(mesh.cell_count()); ++cell) {
    const double third = mesh.cell_area(cell) / 3.0;
    for (int node : space.cell_pressure_dofs(cell)) c[node] += third;
  }
  return c;
}

ConvectionData assemble_convection(const MixedSpace& space, const Eigen::VectorXd& u,
                                   bool with_jacobian) {
  check_velocity(space, u, "assemble_convection");
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(kConvectionDegree);
  ConvectionData out{Eigen::VectorXd::Zero(space.n_vel()), std::nullopt};
  TripletAccumulator acc(space.n_vel(), space.n_vel());
  if (with_jacobian) acc.reserve(mesh.cell_count() * 64);

  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    const auto dofs = space.cell_velocity_dofs(c);
    Eigen::Matrix<double, 8, 1> vec = Eigen::Matrix<double, 8, 1>::Zero();
    Eigen::Matrix<double, 8, 8> jac = Eigen::Matrix<double, 8, 8>::Zero();
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const LocalBasis b = eval_basis(space, c, qr.points[q]);
      const double w = qr.weights[q] * area;
      const Eigen::Vector2d U = velocity_at(space, u, c, b);
      const Eigen::Matrix2d G = velocity_gradient_at(space, u, c, b);
      const double div = G.trace();
      const Eigen::Vector2d F = G * U + 0.5 * div * U;
      for (int m = 0; m < 2; ++m) {
        for (int a = 0; a < 4; ++a) vec(4 * m + a) += w * F[m] * b.value[static_cast<std::size_t>(a)];
      }
      if (!with_jacobian) continue;
      for (int n = 0; n < 2; ++n) {
        for (int bj = 0; bj < 4; ++bj) {
          const double phi = b.value[static_cast<std::size_t>(bj)];
          const Eigen::Vector2d& dphi = b.grad[static_cast<std::size_t>(bj)];
          const double adv = U.dot(dphi);
          for (int m = 0; m < 2; ++m) {
            double dF = phi * G(m, n) + 0.5 * dphi[n] * U[m];
            if (m == n) dF += adv + 0.5 * div * phi;
            for (int a = 0; a < 4; ++a) jac(4 * m + a, 4 * n + bj) += w * dF * b.value[static_cast<std::size_t>(a)];
          }
        }
      }
    }
    for (int i = 0; i < 8; ++i) {
      const int di = dofs[static_cast<std::size_t>(i)];
      if (di == kNoDof) continue;
      out.vector[di] += vec(i);
      if (!with_jacobian) continue;
      for (int j = 0; j < 8; ++j) {
        const int dj = dofs[static_cast<std::size_t>(j)];
        if (dj != kNoDof) acc.add(di, dj, jac(i, j));
      }
    }
  }
  if (with_jacobian) out.jacobian = acc.finalize();
  return out;
}

double trilinear_form(const MixedSpace& space, const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                      const Eigen::VectorXd& w) {
  check_velocity(space, u, "trilinear_form");
  check_velocity(space, v, "trilinear_form");
  check_velocity(space, w, "trilinear_form");
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(kConvectionDegree);
  double total = 0.0;
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    double cell_sum = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const LocalBasis b = eval_basis(space, c, qr.points[q]);
      const Eigen::Vector2d U = velocity_at(space, u, c, b);
      const double divU = velocity_gradient_at(space, u, c, b).trace();
      const Eigen::Vector2d V = velocity_at(space, v, c, b);
      const Eigen::Matrix2d GV = velocity_gradient_at(space, v, c, b);
      const Eigen::Vector2d W = velocity_at(space, w, c, b);
      cell_sum += qr.weights[q] * (GV * U + 0.5 * divU * V).dot(W);
    }
    total += area * cell_sum;
  }
  return total;
}

Eigen::VectorXd assemble_load(const MixedSpace& space, const VectorField& f, double t) {
  const Mesh& mesh = space.mesh();
  const QuadratureRule& qr = rule(kLoadDegree);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_vel());
  for (int c = 0; c < static_cast<int>(mesh.cell_count()); ++c) {
    const double area = mesh.cell_area(c);
    const auto dofs = space.cell_velocity_dofs(c);
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Barycentric& l = qr.points[q];
      const Eigen::Vector2d fx = f(mesh.map_to_physical(c, l), t);
      const double w = qr.weights[q] * area;
      const double bubble = 27.0 * l[0] * l[1] * l[2];
      for (int m = 0; m < 2; ++m) {
        for (int a = 0; a < 4; ++a) {
          const int d = dofs[static_cast<std::size_t>(4 * m + a)];
          if (d != kNoDof) out[d] += w * fx[m] * (a < 3 ? l[static_cast<std::size_t>(a)] : bubble);
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd assemble_cross_load(const MixedSpace& fine, const MixedSpace& coarse,
                                    const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                                    const VectorField& f, double t, bool linear_part,
                                    const MeshOverlay& overlay) {
  check_velocity(coarse, coarse_state.velocity, "assemble_cross_load");
  check_velocity(coarse, dstar, "assemble_cross_load");
  if (&overlay.fine() != &fine.mesh() || &overlay.coarse() != &coarse.mesh()) {
    throw ConfigError("assemble_cross_load: overlay built for different meshes");
  }
  Eigen::VectorXd out = assemble_load(fine, f, t);
  overlay.visit(rule(kConvectionDegree), [&](int fc, const Barycentric& fl, int cc,
                                             const Barycentric& cl, double w) {
    const LocalBasis cb = eval_basis(coarse, cc, cl);
    const Eigen::Vector2d U = velocity_at(coarse, coarse_state.velocity, cc, cb, linear_part);
    const Eigen::Matrix2d G = velocity_gradient_at(coarse, coarse_state.velocity, cc, cb, linear_part);
    const Eigen::Vector2d D = velocity_at(coarse, dstar, cc, cb, linear_part);
    const Eigen::Vector2d g = G * U + 0.5 * G.trace() * U + D;
    const auto dofs = fine.cell_velocity_dofs(fc);
    const double fine_values[4] = {fl[0], fl[1], fl[2], 27.0 * fl[0] * fl[1] * fl[2]};
    for (int m = 0; m < 2; ++m) {
      for (int a = 0; a < 4; ++a) {
        const int d = dofs[static_cast<std::size_t>(4 * m + a)];
        if (d != kNoDof) out[d] -= w * g[m] * fine_values[a];
      }
    }
  });
  return out;
}

Eigen::VectorXd assemble_cross_load(const MixedSpace& fine, const MixedSpace& coarse,
                                    const MixedState& coarse_state, const Eigen::VectorXd& dstar,
                                    const VectorField& f, double t, bool linear_part) {
  const MeshOverlay overlay(fine.mesh_ptr(), coarse.mesh_ptr());
  return assemble_cross_load(fine, coarse, coarse_state, dstar, f, t, linear_part, overlay);
}

}  // namespace nspost
