#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "nspost/assembly.hpp"
#include "nspost/fe_space.hpp"
#include "nspost/manufactured.hpp"
#include "nspost/overlay.hpp"
#include "nspost/sparse.hpp"

using namespace nspost;

namespace {

Eigen::VectorXd random_vector(int n) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(gen);
  return v;
}

void BM_AssembleStiffness(benchmark::State& state) {
  const MixedSpace s(std::make_shared<const Mesh>(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(s, 0.05));
}
BENCHMARK(BM_AssembleStiffness)->Arg(16)->Arg(32)->Arg(64);

void BM_AssembleConvectionJacobian(benchmark::State& state) {
  const MixedSpace s(std::make_shared<const Mesh>(static_cast<int>(state.range(0))));
  const Eigen::VectorXd u = random_vector(s.n_vel());
  for (auto _ : state) benchmark::DoNotOptimize(assemble_convection(s, u, true));
}
BENCHMARK(BM_AssembleConvectionJacobian)->Arg(16)->Arg(32)->Arg(64);

void BM_SaddleFactorization(benchmark::State& state) {
  const MixedSpace s(std::make_shared<const Mesh>(static_cast<int>(state.range(0))));
  const SaddleSystem sys{assemble_stiffness(s, 0.05), assemble_divergence(s), assemble_pressure_mean(s)};
  for (auto _ : state) {
    SaddleFactorization f(sys);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_SaddleFactorization)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SaddleRefactorize(benchmark::State& state) {
  const MixedSpace s(std::make_shared<const Mesh>(static_cast<int>(state.range(0))));
  const SaddleSystem sys{assemble_stiffness(s, 0.05), assemble_divergence(s), assemble_pressure_mean(s)};
  SaddleFactorization f(sys);
  for (auto _ : state) f.refactorize(sys);
}
BENCHMARK(BM_SaddleRefactorize)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MeshOverlay(benchmark::State& state) {
  auto coarse = std::make_shared<const Mesh>(static_cast<int>(state.range(0)));
  auto fine = std::make_shared<const Mesh>(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(MeshOverlay(fine, coarse));
}
BENCHMARK(BM_MeshOverlay)->Args({10, 24})->Args({18, 40})->Unit(benchmark::kMillisecond);

void BM_CrossLoad(benchmark::State& state) {
  auto coarse_mesh = std::make_shared<const Mesh>(static_cast<int>(state.range(0)));
  auto fine_mesh = std::make_shared<const Mesh>(static_cast<int>(state.range(1)));
  const MixedSpace coarse(coarse_mesh), fine(fine_mesh);
  const MeshOverlay ov(fine_mesh, coarse_mesh);
  const ManufacturedCase mc(TimeProfile::linear, 0.05);
  const MixedState st{random_vector(coarse.n_vel()), random_vector(coarse.n_pre()), 0.5};
  const Eigen::VectorXd dstar = random_vector(coarse.n_vel());
  const VectorField f = mc.forcing_field();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_cross_load(fine, coarse, st, dstar, f, 0.5, true, ov));
}
BENCHMARK(BM_CrossLoad)->Args({10, 24})->Args({18, 40})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
