#include <benchmark/benchmark.h>

#include "sqw/bath.hpp"
#include "sqw/fock.hpp"
#include "sqw/quasidist.hpp"

using namespace sqw;

namespace {

const BathParams kBath{0.1, 0.5, 0.4, 1.0};
const DriveSpec kDrive = CosineDrive{0.2, 1.0, 0.0};

GaussianPhaseFunction coherent(cplx a0) {
  GaussianPhaseFunction f;
  f.mean = a0;
  return f;
}

}  // namespace

static void BM_SampleKernel(benchmark::State& state) {
  const GridSpec spec = GridSpec::square(static_cast<int>(state.range(0)), 5.0);
  const GaussianPhaseFunction k = evolution_kernel(kBath, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_function(k, spec));
}
BENCHMARK(BM_SampleKernel)->Arg(64)->Arg(256);

static void BM_PropagateGrid(benchmark::State& state) {
  const GridSpec spec = GridSpec::square(static_cast<int>(state.range(0)), 5.0);
  const PhaseSpaceGrid w0 = sample_function(coherent({1.0, 0.5}), spec);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_grid(w0, kBath, kDrive, 1.0, spec));
}
BENCHMARK(BM_PropagateGrid)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_LindbladRhs(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Matrix rho = coherent_state({1.0, 0.5}, N).entries;
  for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(rho, 0.3, kBath, kDrive, Frame::rotating));
}
BENCHMARK(BM_LindbladRhs)->Arg(20)->Arg(50)->Arg(100);

static void BM_Integrate(benchmark::State& state) {
  const FockDensityMatrix rho0 = coherent_state({1.0, 0.5}, 50);
  IntegratorConfig cfg;
  cfg.t_end = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(rho0, kBath, kDrive, cfg));
}
BENCHMARK(BM_Integrate)->Unit(benchmark::kMillisecond);

static void BM_Displacement(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(displacement({1.3, -0.4}, N));
}
BENCHMARK(BM_Displacement)->Arg(16)->Arg(50)->Arg(200);

static void BM_WignerGrid(benchmark::State& state) {
  const FockDensityMatrix rho = coherent_state({1.0, 0.5}, 40);
  const GridSpec spec = GridSpec::square(static_cast<int>(state.range(0)), 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(wigner_grid(rho, spec));
}
BENCHMARK(BM_WignerGrid)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Series(benchmark::State& state) {
  const FockDensityMatrix rho0 = coherent_state({1.0, 0.5}, 30);
  const BathParams b{0.1, 0.3, 0.2, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(series_propagate(rho0, b, NoDrive{}, 0.5));
}
BENCHMARK(BM_Series)->Unit(benchmark::kMillisecond);

static void BM_Reconstruct(benchmark::State& state) {
  const OrderingVector r{0.0, 0.0, 0.5};
  const PhaseSpaceGrid w = quasi_distribution(thermal_state(0.4, 12), r, GridSpec::square(160, 6.0));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_rho(w, r, 12));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
