#include "graphkdv/evolution.hpp"
#include "graphkdv/halfline_potentials.hpp"
#include "graphkdv/instability.hpp"
#include "graphkdv/picard.hpp"
#include "graphkdv/profiles.hpp"
#include "graphkdv/spectral_kernels.hpp"
#include "graphkdv/trace_system.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace graphkdv;

namespace {

std::vector<double> uniform_times(double T, double dt) {
  std::vector<double> t;
  const int n = static_cast<int>(std::lround(T / dt));
  for (int k = 0; k <= n; ++k) t.push_back(k * dt);
  return t;
}

TimeSeries bump_series(int n, double dt) {
  TimeSeries s;
  s.dt = dt;
  s.values.resize(n);
  for (int k = 0; k < n; ++k) s.values[k] = std::pow(std::sin(3.0 * k * dt), 2) * std::exp(-k * dt);
  return s;
}

void BM_CubicRoots(benchmark::State& state) {
  double tau = -1e3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cubic_roots_limit(tau, -1.0));
    tau += 0.1;
    if (tau > 1e3) tau = -1e3;
  }
}
BENCHMARK(BM_CubicRoots);

void BM_TraceSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> taus(n);
  std::vector<BoundaryRHS> rhs(n);
  for (int k = 0; k < n; ++k) {
    taus[k] = -50.0 + 100.0 * k / n;
    rhs[k] = {1.0, 0.5, 0.2, 0.3, -0.1, 0.4};
  }
  for (auto _ : state) benchmark::DoNotOptimize(solve_boundary_data(rhs, taus, 1.0, -1.0));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TraceSolve)->Arg(512)->Arg(4096);

void BM_PotentialR(benchmark::State& state) {
  const TimeSeries h = bump_series(static_cast<int>(state.range(0)), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(potential_R(h, 1.0, -1.0));
}
BENCHMARK(BM_PotentialR)->Arg(512)->Arg(4096);

void BM_IbvpRight(benchmark::State& state) {
  const double h = 0.05;
  const TimeSeries f = bump_series(201, 0.5 * h);
  const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(401);
  for (auto _ : state) benchmark::DoNotOptimize(linear_ibvp_right(v0, h, f, -1.0));
}
BENCHMARK(BM_IbvpRight)->Unit(benchmark::kMillisecond);

void BM_GraphGroup(benchmark::State& state) {
  const ProfileParams p(1.0, -1.0, 1.0);
  const GraphFunction U = build_UZ(p, GraphGrid::with_step(40.0, 0.05), StarGraph(1, 1));
  const auto times = uniform_times(0.5, 0.005);
  for (auto _ : state) benchmark::DoNotOptimize(graph_group(U, times, 1.0, -1.0, 1.0));
}
BENCHMARK(BM_GraphGroup)->Unit(benchmark::kMillisecond);

void BM_FdSolve(benchmark::State& state) {
  const double h = 1.0 / state.range(0);
  const ProfileParams p(1.0, -1.0, 1.0);
  const GraphFunction U = build_UZ(p, GraphGrid::with_step(40.0, h), StarGraph(1, 1));
  FdOptions fo;
  fo.T = 0.1;
  fo.dt = 0.01;
  fo.store_every = 10;
  for (auto _ : state) benchmark::DoNotOptimize(fd_solve(U, 1.0, 1.0, -1.0, fo));
}
BENCHMARK(BM_FdSolve)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Picard(benchmark::State& state) {
  const ProfileParams p(1.0, -1.0, 1.0);
  const GraphFunction U = build_UZ(p, GraphGrid::with_step(40.0, 0.05), StarGraph(1, 1));
  const GraphFunction u0 = (0.1 / sobolev_norm(U, 1)) * U;
  PicardOptions po;
  po.T = 0.25;
  for (auto _ : state) benchmark::DoNotOptimize(picard_solve(u0, 1.0, 1.0, -1.0, po));
}
BENCHMARK(BM_Picard)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_DenseSpectrum(benchmark::State& state) {
  const double h = 1.0 / state.range(0);
  const ProfileParams p(1.0, -1.0, 1.0);
  const NEOperator ne = build_NE(p, build_UZ(p, GraphGrid::with_step(40.0, h), StarGraph(1, 1)));
  for (auto _ : state) benchmark::DoNotOptimize(dense_spectrum(ne));
}
BENCHMARK(BM_DenseSpectrum)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_UnstableEigenpair(benchmark::State& state) {
  const ProfileParams p(1.0, -1.0, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(unstable_eigenpair(p, StarGraph(1, 1), GraphGrid::with_step(40.0, 0.05)));
}
BENCHMARK(BM_UnstableEigenpair)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
