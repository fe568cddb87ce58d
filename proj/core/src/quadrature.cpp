#include "nspost/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "nspost/error.hpp"

namespace nspost {
namespace {

void add_centroid(QuadratureRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

void add_orbit3(QuadratureRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const Barycentric& p : {Barycentric{a, a, b}, Barycentric{a, b, a}, Barycentric{b, a, a}}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

void add_orbit6(QuadratureRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const Barycentric& p : {Barycentric{a, b, c}, Barycentric{a, c, b}, Barycentric{b, a, c},
                               Barycentric{b, c, a}, Barycentric{c, a, b}, Barycentric{c, b, a}}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

QuadratureRule make_degree2() {
  QuadratureRule r{{}, {}, 2};
  add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  return r;
}

// Orbit parameters refined to double precision against the moment equations.
QuadratureRule make_degree6() {
  QuadratureRule r{{}, {}, 6};
  add_orbit3(r, 0.24928674517091042129, 0.11678627572637936603);
  add_orbit3(r, 0.06308901449150222834, 0.050844906370206816921);
  add_orbit6(r, 0.053145049844816947353, 0.31035245103378440542, 0.082851075618373575194);
  return r;
}

QuadratureRule make_degree10() {
  QuadratureRule r{{}, {}, 10};
  add_centroid(r, 0.090817990382753580095);
  add_orbit3(r, 0.48557763338365737737, 0.036725957756466704717);
  add_orbit3(r, 0.1094815754850370548, 0.045321059435527934783);
  add_orbit6(r, 0.14170721941487995476, 0.30793983876412095017, 0.072757916845420108604);
  add_orbit6(r, 0.025003534762686386074, 0.24667256063990269392, 0.028327242531057484837);
  add_orbit6(r, 0.0095408154002994575802, 0.066803251012200265774, 0.0094216669637328234599);
  return r;
}

}  // namespace

const QuadratureRule& rule(int degree) {
  static const QuadratureRule r2 = make_degree2();
  static const QuadratureRule r6 = make_degree6();
  static const QuadratureRule r10 = make_degree10();
  switch (degree) {
    case 2: return r2;
    case 6: return r6;
    case 10: return r10;
    default:
      throw ConfigError("quadrature rule of degree " + std::to_string(degree) +
                        " is not available (supported: 2, 6, 10)");
  }
}

LineRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  // Legendre P_n and its derivative at x via the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    const double pn = n == 1 ? x : p1;
    const double pm = n == 1 ? 1.0 : p0;
    return std::pair{pn, n * (x * pn - pm) / (x * x - 1.0)};
  };
  LineRule out;
  out.points.resize(static_cast<std::size_t>(n));
  out.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const auto idx = static_cast<std::size_t>(n - 1 - i);
    out.points[idx] = 0.5 * (1.0 + x);
    out.weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return out;
}

QuadratureRule collapsed_rule(int degree) {
  // Duffy map (s, t) -> (s(1-t), t) with Jacobian (1-t); one extra point in t
  // absorbs the Jacobian factor.
  const int n = degree / 2 + 2;
  const LineRule g = gauss_legendre(n);
  QuadratureRule r{{}, {}, degree};
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double s = g.points[static_cast<std::size_t>(a)];
      const double t = g.points[static_cast<std::size_t>(b)];
      const double l1 = s * (1.0 - t);
      const double l2 = t;
      r.points.push_back({1.0 - l1 - l2, l1, l2});
      // Reference area 1/2 -> area fraction weight: 2 * w_s * w_t * (1 - t).
      r.weights.push_back(2.0 * g.weights[static_cast<std::size_t>(a)] *
                          g.weights[static_cast<std::size_t>(b)] * (1.0 - t));
    }
  }
  return r;
}

}  // namespace nspost
