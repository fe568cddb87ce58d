#pragma once

#include <span>
#include <vector>

#include "nspost/mesh.hpp"

namespace nspost {

/// Symmetric rule on a triangle. Weights are area fractions (sum to 1);
/// multiply by the cell area at the use site.
struct QuadratureRule {
  std::vector<Barycentric> points;
  std::vector<double> weights;
  int degree;

  std::size_t size() const noexcept { return points.size(); }
};

/// Dunavant-type rules: degree 2 (3 points), 6 (12 points), 10 (25 points).
/// Throws ConfigError for any other degree.
const QuadratureRule& rule(int degree);

/// Collapsed Gauss-Legendre product rule exact to `degree`; used for
/// cross-checks at degrees beyond the fixed tables.
QuadratureRule collapsed_rule(int degree);

/// Gauss-Legendre nodes/weights on [0,1] with `n` points (weights sum to 1).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};
LineRule gauss_legendre(int n);

}  // namespace nspost
