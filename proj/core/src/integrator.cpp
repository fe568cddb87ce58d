#include "nspost/integrator.hpp"

#include <cmath>
#include <sstream>

#include "nspost/error.hpp"

namespace nspost {

std::string_view to_string(Scheme s) { return s == Scheme::euler ? "euler" : "bdf2"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "euler") return Scheme::euler;
  if (name == "bdf2") return Scheme::bdf2;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected euler|bdf2)");
}

int SchemeConfig::steps() const {
  if (!(k > 0.0)) throw ConfigError("scheme: time step k must be positive");
  if (!(t_end > 0.0)) throw ConfigError("scheme: t_end must be positive");
  if (!(nu > 0.0)) throw ConfigError("scheme: viscosity must be positive");
  if (newton_max_iter < 1) throw ConfigError("scheme: newton_max_iter must be >= 1");
  const double ratio = t_end / k;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n) {
    std::ostringstream msg;
    msg << "scheme: t_end / k = " << ratio << " is not an integer step count";
    throw ConfigError(msg.str());
  }
  return static_cast<int>(n);
}

Eigen::VectorXd discrete_time_derivative(Scheme scheme, double k,
                                         const std::vector<const Eigen::VectorXd*>& history) {
  if (history.size() < 2) throw ConfigError("discrete_time_derivative: need at least two time levels");
  const std::size_t n = history.size();
  const Eigen::VectorXd& un = *history[n - 1];
  const Eigen::VectorXd& u1 = *history[n - 2];
  if (scheme == Scheme::bdf2 && n >= 3) {
    const Eigen::VectorXd& u0 = *history[n - 3];
    return (1.5 * un - 2.0 * u1 + 0.5 * u0) / k;
  }
  return (un - u1) / k;
}

Eigen::VectorXd Trajectory::final_time_derivative() const {
  if (states.size() < 2) throw ConfigError("final_time_derivative: trajectory has a single level");
  const std::size_t n = states.size();
  // With BDF2 the first step is Euler; only use three levels past it.
  const bool bdf2_level = scheme == Scheme::bdf2 && n >= 3 && steps.size() >= 2;
  std::vector<const Eigen::VectorXd*> hist;
  if (bdf2_level) hist.push_back(&states[n - 3].velocity);
  hist.push_back(&states[n - 2].velocity);
  hist.push_back(&states[n - 1].velocity);
  return discrete_time_derivative(scheme, k, hist);
}

NavierStokesIntegrator::NavierStokesIntegrator(const MixedSpace& space, SchemeConfig config)
    : space_(space),
      config_(config),
      mass_(assemble_mass(space)),
      stiffness_(assemble_stiffness(space, config.nu)),
      divergence_(assemble_divergence(space)),
      mean_(assemble_pressure_mean(space)) {
  (void)config_.steps();
}

MixedState NavierStokesIntegrator::initial_state(const VectorField& u0) const {
  const SaddleFactorization fact(SaddleSystem{mass_, divergence_, mean_});
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(fact.size());
  rhs.head(space_.n_vel()) = assemble_load(space_, u0, 0.0);
  const Eigen::VectorXd x = fact.solve(rhs);
  return {x.head(space_.n_vel()), x.segment(space_.n_vel(), space_.n_pre()), 0.0};
}

NavierStokesIntegrator::Coefficients NavierStokesIntegrator::coefficients(
    const std::vector<const MixedState*>& history) const {
  if (history.empty() || history.size() > 2) {
    throw ConfigError("step: history must hold one or two previous states");
  }
  if (history.size() == 2 && config_.scheme == Scheme::bdf2) {
    return {1.5, 2.0 * history[1]->velocity - 0.5 * history[0]->velocity};
  }
  return {1.0, history.back()->velocity};
}

Eigen::VectorXd NavierStokesIntegrator::scheme_residual(const std::vector<const MixedState*>& history,
                                                        const MixedState& candidate,
                                                        const Eigen::VectorXd& load,
                                                        double multiplier) const {
  const auto [alpha, hist] = coefficients(history);
  const int nv = space_.n_vel();
  const int np = space_.n_pre();
  const Eigen::VectorXd& U = candidate.velocity;
  const Eigen::VectorXd& P = candidate.pressure;
  Eigen::VectorXd r(nv + np + 1);
  r.head(nv) = mass_ * ((alpha * U - hist) / config_.k) + stiffness_ * U +
               assemble_convection(space_, U).vector - divergence_.transpose_times(P) - load;
  r.segment(nv, np) = -(divergence_ * U) + multiplier * mean_;
  r[nv + np] = mean_.dot(P);
  return r;
}

MixedState NavierStokesIntegrator::step(const std::vector<const MixedState*>& history,
                                        const VectorField& f, double t_new, StepReport* report) {
  const auto [alpha, hist] = coefficients(history);
  const int nv = space_.n_vel();
  const int np = space_.n_pre();
  const double k = config_.k;
  const Eigen::VectorXd load = assemble_load(space_, f, t_new);
  const SparseMatrix base = linear_combination(alpha / k, mass_, 1.0, stiffness_);

  MixedState s{history.back()->velocity, history.back()->pressure, t_new};
  double lambda = 0.0;
  std::vector<double> residuals;
  int iterations = 0;
  for (;;) {
    const ConvectionData conv = assemble_convection(space_, s.velocity, true);
    Eigen::VectorXd r(nv + np + 1);
    r.head(nv) = base * s.velocity - mass_ * (hist / k) + conv.vector -
                 divergence_.transpose_times(s.pressure) - load;
    r.segment(nv, np) = -(divergence_ * s.velocity) + lambda * mean_;
    r[nv + np] = mean_.dot(s.pressure);
    const double res = r.lpNorm<Eigen::Infinity>();
    residuals.push_back(res);
    if (res <= config_.newton_tol) break;
    if (iterations == config_.newton_max_iter) {
      std::ostringstream msg;
      msg << "Newton did not converge at t = " << t_new << " after " << iterations
          << " iterations (residual " << res << ")";
      throw StepFailure(msg.str(), t_new, residuals);
    }
    const SaddleSystem jac{linear_combination(1.0, base, 1.0, *conv.jacobian), divergence_, mean_};
    if (newton_fact_) {
      newton_fact_->refactorize(jac);
    } else {
      newton_fact_ = std::make_unique<SaddleFactorization>(jac);
    }
    const Eigen::VectorXd dx = newton_fact_->solve(-r);
    s.velocity += dx.head(nv);
    s.pressure += dx.segment(nv, np);
    lambda += dx[nv + np];
    ++iterations;
  }
  if (report) {
    *report = {t_new, iterations, residuals.back(),
               (divergence_ * s.velocity).lpNorm<Eigen::Infinity>(), std::abs(mean_.dot(s.pressure))};
  }
  return s;
}

Trajectory NavierStokesIntegrator::integrate(const VectorField& u0, const VectorField& f, bool keep_all) {
  const int n = config_.steps();
  Trajectory traj{config_.scheme, config_.k, {}, {}};
  traj.states.push_back(initial_state(u0));
  traj.steps.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const double t_new = config_.t_end * i / n;
    std::vector<const MixedState*> hist;
    const std::size_t m = traj.states.size();
    if (config_.scheme == Scheme::bdf2 && i >= 2) hist.push_back(&traj.states[m - 2]);
    hist.push_back(&traj.states[m - 1]);
    StepReport rep{};
    MixedState next = step(hist, f, t_new, &rep);
    traj.steps.push_back(rep);
    traj.states.push_back(std::move(next));
    if (!keep_all && traj.states.size() > 3) traj.states.erase(traj.states.begin());
  }
  return traj;
}

MixedState initial_state(const MixedSpace& space, const VectorField& u0) {
  SchemeConfig cfg;
  return NavierStokesIntegrator(space, cfg).initial_state(u0);
}

Trajectory integrate(const MixedSpace& space, const SchemeConfig& config, const VectorField& u0,
                     const VectorField& f, bool keep_all) {
  return NavierStokesIntegrator(space, config).integrate(u0, f, keep_all);
}

}  // namespace nspost
