// Command-line driver for the mini-element postprocessing experiments.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nspost/error.hpp"
#include "nspost/experiment.hpp"

namespace {

std::vector<int> parse_mesh_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    out.push_back(nspost::parse_mesh_size(text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                      : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mini-element Navier-Stokes solver with a postprocessing error estimator"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(nspost::kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment sweep and write report.json/table.csv");
  run->set_help_flag("--help", "Print this help message and exit");
  std::string experiment = "semidiscrete", phi, scheme, h, hfine, k, out = "out";
  double nu = 0.0, tstar = 0.0;
  bool residual = false;
  std::uint64_t seed = 0;
  int jobs = 1;
  run->add_option("--experiment", experiment, "semidiscrete|fullydiscrete|convergence|custom")
      ->capture_default_str();
  auto* o_phi = run->add_option("--phi", phi, "time profile: linear|sine");
  auto* o_nu = run->add_option("--nu", nu, "viscosity");
  auto* o_h = run->add_option("--h", h, "Galerkin mesh sizes, e.g. 1/10,1/12");
  auto* o_hfine = run->add_option("--hfine", hfine, "paired postprocessing mesh sizes; 'none' disables");
  auto* o_scheme = run->add_option("--scheme", scheme, "euler|bdf2");
  auto* o_k = run->add_option("--k,--k-sweep", k, "time steps: list, or start:stop:halve");
  auto* o_tstar = run->add_option("--tstar", tstar, "final time");
  run->add_option("--out", out, "output directory")->capture_default_str();
  auto* o_res = run->add_flag("--residual-estimator", residual, "also evaluate the residual estimator");
  auto* o_seed = run->add_option("--seed", seed, "seed for audit point sampling");
  run->add_option("--jobs,-j", jobs, "worker threads")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    nspost::RunConfig cfg = nspost::RunConfig::defaults(nspost::parse_experiment(experiment));
    if (o_phi->count()) cfg.phi = nspost::parse_profile(phi);
    if (o_nu->count()) cfg.nu = nu;
    if (o_h->count()) {
      cfg.meshes = parse_mesh_list(h);
      if (!o_hfine->count() && cfg.fine_meshes.size() != cfg.meshes.size()) cfg.fine_meshes.clear();
    }
    if (o_hfine->count()) cfg.fine_meshes = hfine == "none" ? std::vector<int>{} : parse_mesh_list(hfine);
    if (o_scheme->count()) cfg.scheme = nspost::parse_scheme(scheme);
    if (o_k->count()) cfg.k_values = nspost::parse_k_spec(k);
    if (o_tstar->count()) cfg.t_star = tstar;
    if (o_res->count()) cfg.residual_estimator = residual;
    if (o_seed->count()) cfg.seed = seed;
    cfg.jobs = jobs;

    const nspost::ExperimentResult result = nspost::run_experiment(cfg);
    nspost::write_outputs(result, out);
    std::cout << nspost::table_csv(result);
    for (const auto& cell : result.cells) {
      if (!cell.ok) std::cerr << "cell h=1/" << cell.n << " k=" << cell.k << " failed: " << cell.message << '\n';
    }
    return result.all_ok() ? 0 : 2;
  } catch (const nspost::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
