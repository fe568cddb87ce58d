#include "nspost/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nspost/error.hpp"

namespace nspost {

using nlohmann::json;

std::string_view to_string(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::semidiscrete: return "semidiscrete";
    case ExperimentKind::fullydiscrete: return "fullydiscrete";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::custom: return "custom";
  }
  return "custom";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto e : {ExperimentKind::semidiscrete, ExperimentKind::fullydiscrete, ExperimentKind::convergence,
                 ExperimentKind::custom}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("experiment: unknown name '" + std::string(name) +
                    "' (expected semidiscrete|fullydiscrete|convergence|custom)");
}

RunConfig RunConfig::defaults(ExperimentKind kind) {
  RunConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::semidiscrete:
      c.phi = TimeProfile::linear;
      c.meshes = {10, 12, 14, 16, 18};
      c.fine_meshes = {24, 30, 34, 38, 40};
      c.scheme = Scheme::bdf2;
      c.k_values = {1e-3};
      break;
    case ExperimentKind::fullydiscrete:
      c.phi = TimeProfile::sine;
      c.meshes = {18};
      c.fine_meshes = {40};
      c.scheme = Scheme::euler;
      c.k_values = {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
      break;
    case ExperimentKind::convergence:
      c.phi = TimeProfile::linear;
      c.meshes = {8, 16, 32};
      c.scheme = Scheme::bdf2;
      c.k_values = {1e-3};
      break;
    case ExperimentKind::custom:
      break;
  }
  return c;
}

void RunConfig::validate() const {
  if (meshes.empty()) throw ConfigError("config.meshes: mesh list is empty");
  for (int n : meshes) {
    if (n < 1) throw ConfigError("config.meshes: subdivision counts must be >= 1");
  }
  if (!fine_meshes.empty()) {
    if (fine_meshes.size() != meshes.size()) {
      throw ConfigError("config.fine_meshes: expected " + std::to_string(meshes.size()) +
                        " entries paired with config.meshes, got " + std::to_string(fine_meshes.size()));
    }
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      if (fine_meshes[i] <= meshes[i]) {
        throw ConfigError("config.fine_meshes[" + std::to_string(i) + "]: h' = 1/" +
                          std::to_string(fine_meshes[i]) + " must be smaller than h = 1/" +
                          std::to_string(meshes[i]));
      }
    }
  }
  if (k_values.empty()) throw ConfigError("config.k_values: time-step list is empty");
  if (!(nu > 0.0)) throw ConfigError("config.nu: viscosity must be positive");
  if (!(t_star > 0.0)) throw ConfigError("config.t_star: must be positive");
  if (jobs < 1) throw ConfigError("config.jobs: must be >= 1");
  for (double k : k_values) {
    SchemeConfig sc{scheme, k, t_star, newton_tol, newton_max_iter, nu};
    try {
      (void)sc.steps();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("config.k_values: ") + e.what());
    }
  }
}

bool ExperimentResult::all_ok() const {
  for (const auto& c : cells) {
    if (!c.ok) return false;
  }
  return true;
}

namespace {

struct MeshPair {
  std::size_t index;
  int n;
  int n_fine;
};

void run_group(const RunConfig& cfg, const ManufacturedCase& mcase, const MeshPair& pair,
               std::vector<CellResult>& out, std::size_t first_slot) {
  auto mesh = std::make_shared<const Mesh>(pair.n);
  const MixedSpace space(mesh);
  std::unique_ptr<StokesSolver> fine_solver;
  std::unique_ptr<MeshOverlay> overlay;
  std::unique_ptr<MixedSpace> fine_space;
  const VectorField f = mcase.forcing_field();
  const VectorField u0 = mcase.velocity_field();

  for (std::size_t j = 0; j < cfg.k_values.size(); ++j) {
    CellResult& cell = out[first_slot + j];
    cell.n = pair.n;
    cell.n_fine = pair.n_fine;
    cell.k = cfg.k_values[j];
    const auto start = std::chrono::steady_clock::now();
    try {
      const SchemeConfig sc{cfg.scheme, cell.k, cfg.t_star, cfg.newton_tol, cfg.newton_max_iter, cfg.nu};
      const Trajectory traj = integrate(space, sc, u0, f, false);
      const MixedState& state = traj.final_state();
      const Eigen::VectorXd dstar = traj.final_time_derivative();

      cell.audit.steps = static_cast<int>(traj.steps.size());
      for (const StepReport& s : traj.steps) {
        cell.audit.newton_iterations += s.newton_iterations;
        cell.audit.max_residual = std::max(cell.audit.max_residual, s.residual);
        cell.audit.max_divergence = std::max(cell.audit.max_divergence, s.divergence);
        cell.audit.max_pressure_mean = std::max(cell.audit.max_pressure_mean, s.pressure_mean);
      }
      cell.galerkin_error = error_norms(space, state, mcase, cfg.t_star, true);

      if (pair.n_fine > 0) {
        if (!fine_solver) {
          auto fine_mesh = std::make_shared<const Mesh>(pair.n_fine);
          fine_space = std::make_unique<MixedSpace>(fine_mesh);
          fine_solver = std::make_unique<StokesSolver>(*fine_space, cfg.nu);
          overlay = std::make_unique<MeshOverlay>(fine_solver->space().mesh_ptr(), mesh);
        }
        const MixedState post =
            postprocess(*fine_solver, space, state, dstar, f, cfg.t_star, true, *overlay);
        EstimatorReport rep =
            estimate(space, state, fine_solver->space(), post, *overlay, &mcase, cfg.t_star);
        rep.k = cell.k;
        rep.scheme = std::string(to_string(cfg.scheme));
        cell.estimator = std::move(rep);
      }
      if (cfg.residual_estimator) {
        cell.residual = residual_stokes_estimator(space, state, f, dstar, cfg.nu, cfg.t_star);
      }
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.message = e.what();
    }
    cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
}

SolutionAudit audit_solution(const ManufacturedCase& mcase, double t_star, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SolutionAudit a;
  a.points = 256;
  for (std::size_t i = 0; i < a.points; ++i) {
    const double x = unit(rng);
    const double y = unit(rng);
    const double t = t_star * unit(rng);
    a.max_divergence = std::max(a.max_divergence, std::abs(mcase.exact(x, y, t).velocity_gradient.trace()));
    const double s = unit(rng);
    const Point boundary[4] = {{s, 0.0}, {s, 1.0}, {0.0, s}, {1.0, s}};
    for (const Point& p : boundary) {
      a.max_boundary_velocity =
          std::max(a.max_boundary_velocity, mcase.exact(p.x(), p.y(), t).velocity.lpNorm<Eigen::Infinity>());
    }
  }
  return a;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
  config.validate();
  const ManufacturedCase mcase(config.phi, config.nu);
  ExperimentResult result;
  result.config = config;
  result.solution_audit = audit_solution(mcase, config.t_star, config.seed);

  std::vector<MeshPair> pairs;
  for (std::size_t i = 0; i < config.meshes.size(); ++i) {
    pairs.push_back({i, config.meshes[i], config.fine_meshes.empty() ? 0 : config.fine_meshes[i]});
  }
  const std::size_t nk = config.k_values.size();
  result.cells.resize(pairs.size() * nk);

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), pairs.size());
  if (workers <= 1) {
    for (const auto& p : pairs) run_group(config, mcase, p, result.cells, p.index * nk);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < pairs.size(); i = next++) {
          run_group(config, mcase, pairs[i], result.cells, pairs[i].index * nk);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return result;
}

namespace {

json norms_json(const ErrorNorms& n) {
  return {{"vel1_L2", n.vel1_L2}, {"vel1_H1", n.vel1_H1}, {"vel2_L2", n.vel2_L2}, {"vel2_H1", n.vel2_H1},
          {"vel_L2", n.vel_L2},   {"vel_H1", n.vel_H1},   {"pre_L2R", n.pre_L2R}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string optional_csv(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string report_json(const ExperimentResult& r) {
  const RunConfig& c = r.config;
  json cfg = {{"experiment", to_string(c.experiment)},
              {"phi", to_string(c.phi)},
              {"nu", c.nu},
              {"t_star", c.t_star},
              {"meshes", c.meshes},
              {"fine_meshes", c.fine_meshes},
              {"scheme", to_string(c.scheme)},
              {"k_values", c.k_values},
              {"residual_estimator", c.residual_estimator},
              {"seed", c.seed},
              {"newton_tol", c.newton_tol},
              {"newton_max_iter", c.newton_max_iter}};
  json cells = json::array();
  for (const CellResult& cell : r.cells) {
    json j = {{"n", cell.n},
              {"h", 1.0 / cell.n},
              {"n_fine", cell.n_fine},
              {"h_fine", cell.n_fine > 0 ? json(1.0 / cell.n_fine) : json(nullptr)},
              {"k", cell.k},
              {"scheme", to_string(c.scheme)},
              {"t_star", c.t_star},
              {"status", cell.ok ? "ok" : "failed"},
              {"message", cell.message}};
    if (cell.ok) {
      j["galerkin_error"] = norms_json(cell.galerkin_error);
      j["integration"] = {{"steps", cell.audit.steps},
                          {"newton_iterations", cell.audit.newton_iterations},
                          {"max_residual", cell.audit.max_residual},
                          {"max_divergence", cell.audit.max_divergence},
                          {"max_pressure_mean", cell.audit.max_pressure_mean}};
    }
    if (cell.estimator) {
      const EstimatorReport& e = *cell.estimator;
      j["estimated"] = norms_json(e.estimated);
      j["postprocessed_error"] = e.postprocessed_error ? norms_json(*e.postprocessed_error) : json(nullptr);
      j["theta"] = {{"vel_L2", optional_json(e.theta_vel_L2)},
                    {"vel_H1", optional_json(e.theta_vel_H1)},
                    {"pre", optional_json(e.theta_pre)}};
    }
    if (cell.residual) {
      j["residual_estimator"] = {{"eta", cell.residual->eta},
                                 {"cell_part", cell.residual->cell_part},
                                 {"jump_part", cell.residual->jump_part},
                                 {"divergence_part", cell.residual->divergence_part},
                                 {"vel_H1", cell.residual->vel_H1},
                                 {"pre", cell.residual->pre}};
    }
    cells.push_back(std::move(j));
  }
  json doc = {{"schema", kReportSchema},
              {"version", kVersion},
              {"config", std::move(cfg)},
              {"solution_audit",
               {{"points", r.solution_audit.points},
                {"max_divergence", r.solution_audit.max_divergence},
                {"max_boundary_velocity", r.solution_audit.max_boundary_velocity}}},
              {"cells", std::move(cells)}};
  return doc.dump(2) + "\n";
}

std::string table_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << "h,hfine,k,scheme,err_vel_L2,err_vel_H1,err_pre,est_vel_L2,est_vel_H1,est_pre,theta_L2,theta_H1,"
        "theta_pre\n";
  for (const CellResult& cell : r.cells) {
    os << format_double(1.0 / cell.n) << ',' << (cell.n_fine > 0 ? format_double(1.0 / cell.n_fine) : "")
       << ',' << format_double(cell.k) << ',' << to_string(r.config.scheme);
    if (cell.ok) {
      os << ',' << format_double(cell.galerkin_error.vel1_L2) << ',' << format_double(cell.galerkin_error.vel1_H1)
         << ',' << format_double(cell.galerkin_error.pre_L2R);
    } else {
      os << ",,,";
    }
    if (cell.estimator) {
      const EstimatorReport& e = *cell.estimator;
      os << ',' << format_double(e.estimated.vel1_L2) << ',' << format_double(e.estimated.vel1_H1) << ','
         << format_double(e.estimated.pre_L2R) << ',' << optional_csv(e.theta_vel_L2) << ','
         << optional_csv(e.theta_vel_H1) << ',' << optional_csv(e.theta_pre);
    } else {
      os << ",,,,,,";
    }
    os << '\n';
  }
  return os.str();
}

std::string timings_json(const ExperimentResult& r) {
  json cells = json::array();
  double total = 0.0;
  for (const CellResult& cell : r.cells) {
    cells.push_back({{"n", cell.n}, {"n_fine", cell.n_fine}, {"k", cell.k}, {"seconds", cell.seconds}});
    total += cell.seconds;
  }
  return json{{"total_seconds", total}, {"cells", std::move(cells)}}.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (dir / name).string());
    os << text;
  };
  write("report.json", report_json(result));
  write("table.csv", table_csv(result));
  write("timings.json", timings_json(result));
}

double parse_fraction(std::string_view text) {
  auto parse_number = [&](std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError("cannot parse number '" + std::string(text) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_number(text);
  const double den = parse_number(text.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
  return parse_number(text.substr(0, slash)) / den;
}

int parse_mesh_size(std::string_view text) {
  const double h = parse_fraction(text);
  if (!(h > 0.0 && h <= 1.0)) throw ConfigError("mesh size '" + std::string(text) + "' must lie in (0, 1]");
  const double n = std::round(1.0 / h);
  if (std::abs(1.0 / h - n) > 1e-9 * n) {
    throw ConfigError("mesh size '" + std::string(text) + "' is not of the form 1/N");
  }
  return static_cast<int>(n);
}

std::vector<double> parse_k_spec(std::string_view text) {
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos || text.substr(b + 1) != "halve") {
      throw ConfigError("k sweep '" + std::string(text) + "' must read start:stop:halve");
    }
    const double start = parse_fraction(text.substr(0, a));
    const double stop = parse_fraction(text.substr(a + 1, b - a - 1));
    if (!(start > 0.0 && stop > 0.0 && stop <= start)) {
      throw ConfigError("k sweep '" + std::string(text) + "' needs 0 < stop <= start");
    }
    for (double k = start; k >= stop * (1.0 - 1e-12); k *= 0.5) out.push_back(k);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_fraction(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace nspost
