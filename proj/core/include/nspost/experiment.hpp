#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nspost/estimator.hpp"
#include "nspost/integrator.hpp"
#include "nspost/manufactured.hpp"

namespace nspost {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::string_view kReportSchema = "nspost.report/1";

enum class ExperimentKind { semidiscrete, fullydiscrete, convergence, custom };

std::string_view to_string(ExperimentKind e);
ExperimentKind parse_experiment(std::string_view name);

/// Sweep definition. Meshes are given by their subdivision counts
/// (h = 1/N); `fine_meshes`, when non-empty, pairs one postprocessing mesh
/// with each Galerkin mesh.
struct RunConfig {
  ExperimentKind experiment = ExperimentKind::custom;
  TimeProfile phi = TimeProfile::linear;
  double nu = 0.05;
  double t_star = 0.5;
  std::vector<int> meshes;
  std::vector<int> fine_meshes;
  Scheme scheme = Scheme::bdf2;
  std::vector<double> k_values;
  bool residual_estimator = false;
  std::uint64_t seed = 20240601;
  int jobs = 1;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;

  /// Defaults of the named experiment (custom: empty lists).
  static RunConfig defaults(ExperimentKind kind);
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Solver-side audit of one cell.
struct IntegrationAudit {
  int steps = 0;
  int newton_iterations = 0;
  double max_residual = 0.0;
  double max_divergence = 0.0;
  double max_pressure_mean = 0.0;
};

struct CellResult {
  int n = 0;
  int n_fine = 0;  ///< 0 when no postprocessing mesh is paired
  double k = 0.0;
  bool ok = false;
  std::string message;
  ErrorNorms galerkin_error;
  std::optional<EstimatorReport> estimator;
  std::optional<ResidualEstimate> residual;
  IntegrationAudit audit;
  double seconds = 0.0;
};

/// Properties of the exact solution checked at seeded random points.
struct SolutionAudit {
  std::size_t points = 0;
  double max_divergence = 0.0;
  double max_boundary_velocity = 0.0;
};

struct ExperimentResult {
  RunConfig config;
  std::vector<CellResult> cells;
  SolutionAudit solution_audit;
  bool all_ok() const;
};

ExperimentResult run_experiment(const RunConfig& config);

/// JSON report (bitwise reproducible; timings are kept out of it).
std::string report_json(const ExperimentResult& result);
std::string table_csv(const ExperimentResult& result);
std::string timings_json(const ExperimentResult& result);
/// Writes report.json, table.csv and timings.json into `dir`.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

/// "1/18", "0.05" or "1e-3" to a double.
double parse_fraction(std::string_view text);
/// Mesh size "1/N" (or "N" ... "0.0625") to the subdivision count N.
int parse_mesh_size(std::string_view text);
/// Either a comma list of fractions, or "start:stop:halve" producing
/// start, start/2, ... down to stop.
std::vector<double> parse_k_spec(std::string_view text);

}  // namespace nspost
