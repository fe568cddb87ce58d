// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fe_oracles.hpp"
#include "nspost/assembly.hpp"
#include "nspost/estimator.hpp"
#include "nspost/experiment.hpp"
#include "nspost/stokes.hpp"
#include "oracles.hpp"

using namespace nspost;

namespace {

struct Verdict {
  int id;
  bool pass;
  std::string summary;
};

std::vector<Verdict> verdicts;

/// Accumulated per-step audit of every integration run by this binary.
struct InvariantLog {
  double max_residual = 0.0;
  double max_divergence = 0.0;
  double max_pressure_mean = 0.0;
  long steps = 0;
  void add(const std::vector<StepReport>& reps) {
    for (const auto& r : reps) {
      max_residual = std::max(max_residual, r.residual);
      max_divergence = std::max(max_divergence, r.divergence);
      max_pressure_mean = std::max(max_pressure_mean, r.pressure_mean);
      ++steps;
    }
  }
  void add(const IntegrationAudit& a) {
    max_residual = std::max(max_residual, a.max_residual);
    max_divergence = std::max(max_divergence, a.max_divergence);
    max_pressure_mean = std::max(max_pressure_mean, a.max_pressure_mean);
    steps += a.steps;
  }
} invariants;

void record(int id, bool pass, const std::string& summary) {
  verdicts.push_back({id, pass, summary});
  std::printf("[criterion %d] %s: %s\n", id, pass ? "PASS" : "FAIL", summary.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

/// Least-squares slope of log(err) against log(1/x).
double fitted_slope(const std::vector<double>& x, const std::vector<double>& err) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = -std::log(x[i]);
    const double ly = std::log(err[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ExperimentResult run_logged(const RunConfig& c) {
  ExperimentResult r = run_experiment(c);
  for (const auto& cell : r.cells) {
    if (cell.ok) invariants.add(cell.audit);
  }
  return r;
}

double mass_norm(const SparseMatrix& m, const Eigen::VectorXd& v) { return std::sqrt(v.dot(m * v)); }

// ---------------------------------------------------------------- 1 and 2
void efficiency_sweep() {
  const std::array<std::array<double, 3>, 5> reference{{{1.3640, 0.7721, 1.2588},
                                                    {1.3280, 1.0197, 1.1602},
                                                    {1.1695, 1.0068, 1.1084},
                                                    {1.3259, 0.9290, 1.0526},
                                                    {1.2741, 1.0438, 1.0167}}};
  const ExperimentResult r = run_logged(RunConfig::defaults(ExperimentKind::semidiscrete));
  bool ok1 = r.all_ok() && r.cells.size() == 5;
  bool ok2 = ok1;
  double worst_dev = 0.0, lo = 1e300, hi = -1e300, worst_track = 1.0;
  std::printf("  h      h'     theta_L2 (ref)   theta_H1 (ref)   theta_pre (ref)\n");
  for (std::size_t i = 0; i < r.cells.size() && ok1; ++i) {
    const CellResult& c = r.cells[i];
    const EstimatorReport& e = *c.estimator;
    const double th[3] = {*e.theta_vel_L2, *e.theta_vel_H1, *e.theta_pre};
    std::printf("  1/%-4d 1/%-4d %.4f (%.4f)    %.4f (%.4f)    %.4f (%.4f)\n", c.n, c.n_fine, th[0], reference[i][0],
                th[1], reference[i][1], th[2], reference[i][2]);
    for (int j = 0; j < 3; ++j) {
      worst_dev = std::max(worst_dev, std::abs(th[j] - reference[i][static_cast<std::size_t>(j)]));
      lo = std::min(lo, th[j]);
      hi = std::max(hi, th[j]);
    }
    const ErrorNorms& g = *e.true_error;
    const ErrorNorms& p = *e.postprocessed_error;
    std::printf("         Galerkin H1 %.4e post %.4e | Galerkin pre %.4e post %.4e\n", g.vel1_H1, p.vel1_H1,
                g.pre_L2R, p.pre_L2R);
    ok2 = ok2 && p.vel1_H1 < g.vel1_H1 && p.pre_L2R < g.pre_L2R;
    for (double t : {th[1], th[2]}) worst_track = std::max(worst_track, std::max(t, 1.0 / t));
  }
  ok1 = ok1 && worst_dev <= 0.2 && lo >= 0.7 && hi <= 1.45;
  record(1, ok1,
         "max |theta - reference| = " + fmt("%.4f", worst_dev) + " (limit 0.2), theta range [" + fmt("%.4f", lo) +
             ", " + fmt("%.4f", hi) + "] (limit [0.7, 1.45])");
  ok2 = ok2 && worst_track <= 1.5;
  record(2, ok2,
         "postprocessed H1/pressure errors below Galerkin at every h; worst estimate/true factor " +
             fmt("%.4f", worst_track) + " (limit 1.5)");
}

// ---------------------------------------------------------------- 3
void convergence_rates() {
  RunConfig c = RunConfig::defaults(ExperimentKind::convergence);
  const ExperimentResult r = run_logged(c);
  std::vector<double> h, l2, h1, pre;
  for (const auto& cell : r.cells) {
    h.push_back(1.0 / cell.n);
    l2.push_back(cell.galerkin_error.vel_L2);
    h1.push_back(cell.galerkin_error.vel_H1);
    pre.push_back(cell.galerkin_error.pre_L2R);
    std::printf("  h=1/%-3d vel L2 %.4e  vel H1 %.4e  pre %.4e\n", cell.n, l2.back(), h1.back(), pre.back());
  }
  const double s_l2 = fitted_slope(h, l2), s_h1 = fitted_slope(h, h1), s_pre = fitted_slope(h, pre);

  RunConfig pc = RunConfig::defaults(ExperimentKind::custom);
  pc.meshes = {4, 5, 6, 8};
  pc.fine_meshes = {16, 25, 36, 64};
  pc.k_values = {1e-3};
  const ExperimentResult pr = run_logged(pc);
  std::vector<double> ph, perr;
  for (const auto& cell : pr.cells) {
    ph.push_back(1.0 / cell.n);
    perr.push_back(cell.estimator->postprocessed_error->vel_H1);
    std::printf("  h=1/%-3d h'=1/%-3d postprocessed vel H1 %.4e\n", cell.n, cell.n_fine, perr.back());
  }
  const double s_post = fitted_slope(ph, perr);
  const bool ok = r.all_ok() && pr.all_ok() && s_l2 >= 1.8 && s_h1 >= 0.9 && s_pre >= 0.9 && s_post >= 1.7;
  record(3, ok,
         "slopes vel L2 " + fmt("%.3f", s_l2) + " (>=1.8), vel H1 " + fmt("%.3f", s_h1) + " (>=0.9), pre " +
             fmt("%.3f", s_pre) + " (>=0.9), postprocessed vel H1 " + fmt("%.3f", s_post) + " (>=1.7, h'=h^2)");
}

// ---------------------------------------------------------------- 4 and 5
void temporal() {
  const ManufacturedCase mc(TimeProfile::sine, 0.05);
  auto mesh = std::make_shared<const Mesh>(18);
  const MixedSpace space(mesh);
  const SparseMatrix mass = assemble_mass(space);
  SchemeConfig ref_cfg;
  ref_cfg.scheme = Scheme::bdf2;
  ref_cfg.k = 1e-4;
  const Trajectory ref = integrate(space, ref_cfg, mc.velocity_field(), mc.forcing_field(), false);
  invariants.add(ref.steps);
  const Eigen::VectorXd& uref = ref.final_state().velocity;

  const std::vector<double> ks = parse_k_spec("1/10:1/160:halve");
  std::map<Scheme, std::vector<double>> temporal_err;
  for (Scheme s : {Scheme::euler, Scheme::bdf2}) {
    for (double k : ks) {
      SchemeConfig cfg;
      cfg.scheme = s;
      cfg.k = k;
      const Trajectory tr = integrate(space, cfg, mc.velocity_field(), mc.forcing_field(), false);
      invariants.add(tr.steps);
      temporal_err[s].push_back(mass_norm(mass, tr.final_state().velocity - uref));
      std::printf("  %-5s k=1/%-4.0f |U_k - U_ref| = %.4e\n", std::string(to_string(s)).c_str(), 1.0 / k,
                  temporal_err[s].back());
    }
  }
  const double se = fitted_slope(ks, temporal_err[Scheme::euler]);
  const double sb = fitted_slope(ks, temporal_err[Scheme::bdf2]);
  record(4, std::abs(se - 1.0) <= 0.15 && std::abs(sb - 2.0) <= 0.2,
         "Euler slope " + fmt("%.3f", se) + " (1 +- 0.15), BDF2 slope " + fmt("%.3f", sb) + " (2 +- 0.2)");

  RunConfig c = RunConfig::defaults(ExperimentKind::fullydiscrete);
  c.scheme = Scheme::euler;
  const ExperimentResult euler = run_logged(c);
  std::vector<EstimatorReport> reps;
  for (const auto& cell : euler.cells) {
    const EstimatorReport& e = *cell.estimator;
    std::printf("  euler k=1/%-4.0f est (%.4e %.4e %.4e)  true (%.4e %.4e %.4e)\n", 1.0 / cell.k, e.estimated.vel1_L2,
                e.estimated.vel1_H1, e.estimated.pre_L2R, e.true_error->vel1_L2, e.true_error->vel1_H1,
                e.true_error->pre_L2R);
    reps.push_back(e);
  }
  const SeparationAudit a = temporal_separation_audit(reps);
  bool bdf_smaller = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    bdf_smaller = bdf_smaller && temporal_err[Scheme::bdf2][i] < temporal_err[Scheme::euler][i];
  }
  const bool ok = euler.all_ok() && a.max_spread <= 0.10 && a.true_ratio_vel_L2 >= 2.0 && bdf_smaller;
  record(5, ok,
         "estimator spread " + fmt("%.4f", a.max_spread) + " (<=0.10), Euler true L2 error ratio " +
             fmt("%.3f", a.true_ratio_vel_L2) + " (>=2), H1 ratio " + fmt("%.3f", a.true_ratio_vel_H1) +
             ", BDF2 temporal error below Euler at every k: " + (bdf_smaller ? "yes" : "no"));
}

// ---------------------------------------------------------------- 6
void self_consistency() {
  double worst = 0.0;
  for (TimeProfile prof : {TimeProfile::linear, TimeProfile::sine}) {
    for (Scheme s : {Scheme::euler, Scheme::bdf2}) {
      const ManufacturedCase mc(prof, 0.05);
      auto mesh = std::make_shared<const Mesh>(8);
      const MixedSpace space(mesh);
      SchemeConfig cfg;
      cfg.scheme = s;
      cfg.k = 1.0 / 40;
      cfg.newton_tol = 1e-12;
      const Trajectory tr = integrate(space, cfg, mc.velocity_field(), mc.forcing_field(), false);
      invariants.add(tr.steps);
      const MixedState post = postprocess(space, space, tr.final_state(), tr.final_time_derivative(), 0.05,
                                          mc.forcing_field(), 0.5, false);
      const MeshOverlay ov(mesh, mesh);
      const ErrorNorms d = difference_norms(ov, space, post, false, space, tr.final_state(), false, rule(10));
      worst = std::max({worst, d.vel_L2, d.vel_H1, d.pre_L2R,
                        (post.velocity - tr.final_state().velocity).lpNorm<Eigen::Infinity>(),
                        (post.pressure - tr.final_state().pressure).lpNorm<Eigen::Infinity>()});
    }
  }
  record(6, worst <= 1e-9, "max norm of (postprocessed - Galerkin) on the same space " + fmt("%.3e", worst) + " (<=1e-9)");
}

// ---------------------------------------------------------------- 7
void oracle_equivalence() {
  oracles::Sampler rng(20240601);
  double solve_dev = 0.0;
  for (int n : {2, 4, 6, 8}) {
    const MixedSpace s(std::make_shared<const Mesh>(n));
    const SparseMatrix m = assemble_mass(s);
    const SparseMatrix a = assemble_stiffness(s, 0.05);
    const SparseMatrix b = assemble_divergence(s);
    const Eigen::VectorXd c = assemble_pressure_mean(s);
    const ConvectionData conv = assemble_convection(s, rng.vector(s.n_vel()), true);
    for (const SparseMatrix& block : {a, linear_combination(100.0, m, 1.0, linear_combination(1.0, a, 1.0, *conv.jacobian))}) {
      const SaddleSystem sys{block, b, c};
      const SaddleFactorization f(sys);
      const Eigen::VectorXd rhs = rng.vector(sys.size());
      const Eigen::VectorXd x = f.solve(rhs);
      const Eigen::VectorXd ref = oracles::dense_solve(bordered_matrix(sys).to_dense(), rhs);
      solve_dev = std::max(solve_dev, (x - ref).norm() / ref.norm());
    }
  }

  double elem_dev = 0.0;
  for (int n : {2, 3, 5}) {
    const MixedSpace s(std::make_shared<const Mesh>(n));
    const Eigen::MatrixXd m = assemble_mass(s).to_dense();
    const Eigen::MatrixXd mr = oracles::oracle_assembly(s, [&](int c, int i, int j) { return oracles::local_mass(s, c, i, j); });
    const Eigen::MatrixXd a = assemble_stiffness(s, 1.0).to_dense();
    const Eigen::MatrixXd ar = oracles::oracle_assembly(s, [&](int c, int i, int j) { return oracles::local_stiffness(s, c, i, j); });
    elem_dev = std::max(elem_dev, (m - mr).cwiseAbs().maxCoeff() / mr.cwiseAbs().maxCoeff());
    elem_dev = std::max(elem_dev, (a - ar).cwiseAbs().maxCoeff() / ar.cwiseAbs().maxCoeff());
  }

  double fd_dev = 0.0;
  {
    const MixedSpace s(std::make_shared<const Mesh>(4));
    const Eigen::VectorXd u = rng.vector(s.n_vel());
    const Eigen::MatrixXd j = assemble_convection(s, u, true).jacobian->to_dense();
    const double eps = 1e-6;
    for (int col = 0; col < s.n_vel(); ++col) {
      Eigen::VectorXd up = u, um = u;
      up[col] += eps;
      um[col] -= eps;
      const Eigen::VectorXd fd = (assemble_convection(s, up).vector - assemble_convection(s, um).vector) / (2 * eps);
      fd_dev = std::max(fd_dev, (fd - j.col(col)).lpNorm<Eigen::Infinity>());
    }
  }

  double forcing_dev = 0.0;
  using HD = oracles::HyperDual;
  using Raw = oracles::RawSolution<HD>;
  for (bool sine : {false, true}) {
    const ManufacturedCase mc(sine ? TimeProfile::sine : TimeProfile::linear, 0.05);
    for (int i = 0; i < 1000; ++i) {
      const double x = rng.uniform(), y = rng.uniform(), t = rng.uniform(0.0, 0.5);
      const auto u1 = oracles::jet([&](HD X, HD Y, HD T) { return Raw::u1(X, Y, T, sine); }, x, y, t);
      const auto u2 = oracles::jet([&](HD X, HD Y, HD T) { return Raw::u2(X, Y, T, sine); }, x, y, t);
      const auto p = oracles::jet([&](HD X, HD Y, HD T) { return Raw::p(X, Y, T, sine); }, x, y, t);
      const Eigen::Vector2d res(
          u1.dt - 0.05 * (u1.dxx + u1.dyy) + u1.value * u1.dx + u2.value * u1.dy + p.dx,
          u2.dt - 0.05 * (u2.dxx + u2.dyy) + u1.value * u2.dx + u2.value * u2.dy + p.dy);
      forcing_dev = std::max(forcing_dev, (res - mc.forcing(x, y, t)).lpNorm<Eigen::Infinity>());
    }
  }
  record(7, solve_dev <= 1e-9 && elem_dev <= 1e-13 && fd_dev <= 1e-6 && forcing_dev <= 1e-10,
         "saddle vs dense " + fmt("%.2e", solve_dev) + " (<=1e-9), element vs moments " + fmt("%.2e", elem_dev) +
             " (<=1e-13), Jacobian vs FD " + fmt("%.2e", fd_dev) + " (<=1e-6), forcing residual " +
             fmt("%.2e", forcing_dev) + " (<=1e-10)");
}

// ---------------------------------------------------------------- 8
void invariant_suite() {
  oracles::Sampler rng(7);
  double skew = 0.0;
  for (int n : {2, 4, 6}) {
    const MixedSpace s(std::make_shared<const Mesh>(n));
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd u = rng.vector(s.n_vel()), v = rng.vector(s.n_vel()), w = rng.vector(s.n_vel());
      skew = std::max(skew, std::abs(trilinear_form(s, u, v, w) + trilinear_form(s, u, w, v)) /
                                (u.norm() * v.norm() * w.norm()));
    }
  }
  RunConfig c = RunConfig::defaults(ExperimentKind::custom);
  c.phi = TimeProfile::sine;
  c.meshes = {6, 8};
  c.fine_meshes = {12, 16};
  c.k_values = {0.1, 0.05};
  c.residual_estimator = true;
  const std::string a = report_json(run_logged(c));
  c.jobs = 2;
  const std::string b = report_json(run_logged(c));
  const bool same = a == b;
  const bool ok = skew <= 1e-12 && invariants.max_divergence <= 1e-10 && invariants.max_pressure_mean <= 1e-10 &&
                  invariants.max_residual <= 1e-10 && same;
  record(8, ok,
         "skew defect " + fmt("%.2e", skew) + ", over " + std::to_string(invariants.steps) + " steps: divergence " +
             fmt("%.2e", invariants.max_divergence) + ", pressure mean " + fmt("%.2e", invariants.max_pressure_mean) +
             ", Newton residual " + fmt("%.2e", invariants.max_residual) + " (all <=1e-10), reports identical: " +
             (same ? "yes" : "no"));
}

}  // namespace

/// With arguments, runs only the listed criteria (8 then audits only the
/// integrations done by the selected ones plus its own).
int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  auto want = [&](std::initializer_list<int> ids) {
    if (selected.empty()) return true;
    for (int id : ids) {
      if (std::find(selected.begin(), selected.end(), id) != selected.end()) return true;
    }
    return false;
  };
  if (want({7})) oracle_equivalence();
  if (want({6})) self_consistency();
  if (want({1, 2})) efficiency_sweep();
  if (want({3})) convergence_rates();
  if (want({4, 5})) temporal();
  if (want({8})) invariant_suite();
  std::sort(verdicts.begin(), verdicts.end(), [](const Verdict& x, const Verdict& y) { return x.id < y.id; });
  std::printf("\nSummary\n");
  int failed = 0;
  for (const auto& v : verdicts) {
    std::printf("%s criterion %d: %s\n", v.pass ? "PASS" : "FAIL", v.id, v.summary.c_str());
    failed += !v.pass;
  }
  std::printf("elapsed %.1f s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return failed == 0 ? 0 : 1;
}
