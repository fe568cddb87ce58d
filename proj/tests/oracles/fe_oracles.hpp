#pragma once
// Closed-form mini-element matrices from the barycentric moment formula.

#include <array>
#include <functional>

#include <Eigen/Core>

#include "nspost/fe_space.hpp"
#include "oracles.hpp"

namespace oracles {

using nspost::kNoDof;
using nspost::MixedSpace;

/// Integral of l0^e0 l1^e1 l2^e2.
inline double moment3(std::array<int, 3> e, double area) { return bary_moment(e[0], e[1], e[2], area); }

using LocalFn = std::function<double(int cell, int i, int j)>;

/// Reference component-wise assembly from closed-form local entries.
inline Eigen::MatrixXd oracle_assembly(const MixedSpace& s, const LocalFn& local) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(s.n_vel(), s.n_vel());
  for (int c = 0; c < static_cast<int>(s.mesh().cell_count()); ++c) {
    const auto d = s.cell_velocity_dofs(c);
    for (int comp = 0; comp < 2; ++comp) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const int di = d[static_cast<std::size_t>(4 * comp + i)];
          const int dj = d[static_cast<std::size_t>(4 * comp + j)];
          if (di != kNoDof && dj != kNoDof) a(di, dj) += local(c, i, j);
        }
      }
    }
  }
  return a;
}

inline double local_mass(const MixedSpace& s, int c, int i, int j) {
  const double area = s.mesh().cell_area(c);
  std::array<int, 3> e{0, 0, 0};
  double scale = 1.0;
  for (int k : {i, j}) {
    if (k < 3) {
      ++e[static_cast<std::size_t>(k)];
    } else {
      for (auto& x : e) ++x;
      scale *= 27.0;
    }
  }
  return scale * moment3(e, area);
}

inline double local_stiffness(const MixedSpace& s, int c, int i, int j) {
  const double area = s.mesh().cell_area(c);
  const auto& g = s.bary_gradients(c);
  // grad b = 27 sum_k m_k grad l_k with m_0 = l1 l2, m_1 = l0 l2, m_2 = l0 l1.
  auto m_exp = [](int k) {
    std::array<int, 3> e{1, 1, 1};
    e[static_cast<std::size_t>(k)] = 0;
    return e;
  };
  if (i < 3 && j < 3) return area * g[static_cast<std::size_t>(i)].dot(g[static_cast<std::size_t>(j)]);
  if (i < 3 || j < 3) {
    const int p = i < 3 ? i : j;
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += 27.0 * g[static_cast<std::size_t>(p)].dot(g[static_cast<std::size_t>(k)]) * moment3(m_exp(k), area);
    return v;
  }
  double v = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      std::array<int, 3> e = m_exp(k);
      const auto f = m_exp(l);
      for (int r = 0; r < 3; ++r) e[static_cast<std::size_t>(r)] += f[static_cast<std::size_t>(r)];
      v += 729.0 * g[static_cast<std::size_t>(k)].dot(g[static_cast<std::size_t>(l)]) * moment3(e, area);
    }
  }
  return v;
}

}  // namespace oracles
