#include "nspost/manufactured.hpp"

#include <cmath>
#include <string>

#include "nspost/error.hpp"

namespace nspost {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(TimeProfile p) { return p == TimeProfile::linear ? "linear" : "sine"; }

TimeProfile parse_profile(std::string_view name) {
  if (name == "linear") return TimeProfile::linear;
  if (name == "sine") return TimeProfile::sine;
  throw ConfigError("unknown time profile '" + std::string(name) + "' (expected linear|sine)");
}

ManufacturedCase::ManufacturedCase(TimeProfile profile, double nu) : profile_(profile), nu_(nu) {
  if (!(nu > 0.0)) throw ConfigError("ManufacturedCase: viscosity must be positive");
}

double ManufacturedCase::phi(double t) const {
  return profile_ == TimeProfile::linear ? t : std::sin(kSineFrequency * t);
}

double ManufacturedCase::phi_dt(double t) const {
  return profile_ == TimeProfile::linear ? 1.0 : kSineFrequency * std::cos(kSineFrequency * t);
}

ExactValues ManufacturedCase::exact(double x, double y, double t) const {
  // u1 = pi phi S(x) T(y), u2 = -pi phi S(y) T(x) with S = sin^2(pi s),
  // T = sin(2 pi s).
  const double sx = std::sin(kPi * x);
  const double sy = std::sin(kPi * y);
  const double S_x = sx * sx;
  const double S_y = sy * sy;
  const double dS_x = kPi * std::sin(2 * kPi * x);
  const double dS_y = kPi * std::sin(2 * kPi * y);
  const double ddS_x = 2 * kPi * kPi * std::cos(2 * kPi * x);
  const double ddS_y = 2 * kPi * kPi * std::cos(2 * kPi * y);
  const double T_x = std::sin(2 * kPi * x);
  const double T_y = std::sin(2 * kPi * y);
  const double dT_x = 2 * kPi * std::cos(2 * kPi * x);
  const double dT_y = 2 * kPi * std::cos(2 * kPi * y);
  const double ddT_x = -4 * kPi * kPi * T_x;
  const double ddT_y = -4 * kPi * kPi * T_y;

  const double ph = phi(t);
  const double a = kPi * ph;
  const double a_t = kPi * phi_dt(t);

  ExactValues e;
  e.velocity = {a * S_x * T_y, -a * S_y * T_x};
  e.velocity_dt = {a_t * S_x * T_y, -a_t * S_y * T_x};
  e.velocity_gradient << a * dS_x * T_y, a * S_x * dT_y,
                         -a * S_y * dT_x, -a * dS_y * T_x;
  e.velocity_laplacian = {a * (ddS_x * T_y + S_x * ddT_y), -a * (S_y * ddT_x + ddS_y * T_x)};
  e.pressure = 20.0 * ph * x * x * y;
  e.pressure_mean_adjusted = e.pressure - pressure_mean(t);
  e.pressure_gradient = {40.0 * ph * x * y, 20.0 * ph * x * x};
  return e;
}

Eigen::Vector2d ManufacturedCase::forcing(double x, double y, double t) const {
  const ExactValues e = exact(x, y, t);
  return e.velocity_dt - nu_ * e.velocity_laplacian + e.velocity_gradient * e.velocity +
         e.pressure_gradient;
}

VectorField ManufacturedCase::forcing_field() const {
  return [c = *this](const Point& p, double t) { return c.forcing(p.x(), p.y(), t); };
}

VectorField ManufacturedCase::velocity_field() const {
  return [c = *this](const Point& p, double t) { return c.exact(p.x(), p.y(), t).velocity; };
}

ReferenceFields ManufacturedCase::reference(double t) const {
  const ManufacturedCase c = *this;
  return {
      [c, t](const Point& p) { return c.exact(p.x(), p.y(), t).velocity; },
      [c, t](const Point& p) { return c.exact(p.x(), p.y(), t).velocity_gradient; },
      [c, t](const Point& p) { return c.exact(p.x(), p.y(), t).pressure_mean_adjusted; },
  };
}

ErrorNorms error_norms(const MixedSpace& space, const MixedState& state, const ManufacturedCase& c,
                       double t, bool use_linear_part, int degree) {
  const QuadratureRule& qr = rule(degree);
  return field_error_norms(space, state, c.reference(t), use_linear_part, qr);
}

}  // namespace nspost
