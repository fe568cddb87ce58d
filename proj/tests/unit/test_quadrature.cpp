#include <gtest/gtest.h>

#include "nspost/error.hpp"
#include "nspost/quadrature.hpp"
#include "oracles.hpp"

using namespace nspost;

namespace {

double max_moment_error(const QuadratureRule& r, int degree) {
  double worst = 0.0;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      for (int c = 0; a + b + c <= degree; ++c) {
        double q = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
          q += r.weights[i] * std::pow(r.points[i][0], a) * std::pow(r.points[i][1], b) *
               std::pow(r.points[i][2], c);
        }
        worst = std::max(worst, std::abs(q - oracles::bary_moment(a, b, c, 1.0)));
      }
    }
  }
  return worst;
}

}  // namespace

TEST(Quadrature, RuleSizes) {
  EXPECT_EQ(rule(2).size(), 3u);
  EXPECT_EQ(rule(6).size(), 12u);
  EXPECT_EQ(rule(10).size(), 25u);
}

TEST(Quadrature, UnsupportedDegreeThrows) {
  EXPECT_THROW(rule(4), ConfigError);
  EXPECT_THROW(rule(0), ConfigError);
}

TEST(Quadrature, ExactForAllMonomialsUpToDegree) {
  for (int d : {2, 6, 10}) {
    const QuadratureRule& r = rule(d);
    EXPECT_EQ(r.degree, d);
    EXPECT_LT(max_moment_error(r, d), 1e-15) << "degree " << d;
  }
}

TEST(Quadrature, PointsAreInsideWithPositiveWeights) {
  for (int d : {2, 6, 10}) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule(d).size(); ++i) {
      EXPECT_GT(rule(d).weights[i], 0.0);
      sum += rule(d).weights[i];
      const Barycentric& l = rule(d).points[i];
      EXPECT_NEAR(l[0] + l[1] + l[2], 1.0, 1e-15);
      for (double v : l) EXPECT_GT(v, 0.0);
    }
    EXPECT_NEAR(sum, 1.0, 1e-15);
  }
}

TEST(Quadrature, SixthDegreeRuleIsNotSeventhDegree) {
  EXPECT_GT(max_moment_error(rule(6), 7), 1e-8);
}

TEST(Quadrature, CollapsedRule) {
  for (int d : {4, 14, 18}) {
    const QuadratureRule r = collapsed_rule(d);
    EXPECT_LT(max_moment_error(r, d), 1e-14) << "degree " << d;
  }
}

TEST(Quadrature, GaussLegendre) {
  const LineRule r = gauss_legendre(5);
  ASSERT_EQ(r.points.size(), 5u);
  for (int p = 0; p <= 9; ++p) {
    double q = 0.0;
    for (std::size_t i = 0; i < 5; ++i) q += r.weights[i] * std::pow(r.points[i], p);
    EXPECT_NEAR(q, 1.0 / (p + 1), 1e-15);
  }
}
