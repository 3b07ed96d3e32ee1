#include <numbers>

#include <benchmark/benchmark.h>

#include "mch/elliptic.hpp"
#include "mch/evolve.hpp"
#include "mch/indices.hpp"
#include "mch/linop.hpp"

using namespace mch;
using std::numbers::pi;

static void BM_Jacobi(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(elliptic::jacobi(x, 0.7));
    x += 1e-3;
  }
}
BENCHMARK(BM_Jacobi);

static void BM_WaveParams(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(wave_params(0.5, 6 * pi));
}
BENCHMARK(BM_WaveParams);

static void BM_StabilityIndex(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(stability_index(0.5, 8 * pi));
}
BENCHMARK(BM_StabilityIndex);

static void BM_Spectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WaveParams p = wave_params(0.5, 6 * pi);
  const ProfileFields f = sample_profile(p, PeriodicGrid(6 * pi, n));
  const OperatorMatrix l = assemble_l(f.phi, f.phi2, p.c);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(l));
}
BENCHMARK(BM_Spectrum)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Rhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicField u = sample_profile(p, PeriodicGrid(6 * pi, n)).phi;
  for (auto _ : state) benchmark::DoNotOptimize(rhs(u));
}
BENCHMARK(BM_Rhs)->Arg(128)->Arg(512)->Arg(2048);

BENCHMARK_MAIN();
