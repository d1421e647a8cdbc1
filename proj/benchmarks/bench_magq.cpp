#include <benchmark/benchmark.h>

#include "magq/presets.hpp"
#include "magq/weyl.hpp"

using namespace magq;

static void BM_FluxSinusoidal(benchmark::State& state) {
  const FieldSetup fs = field_preset("sinusoidal:1,0.5", "symmetric", 2);
  const Pt a = make_pt({0.1, -0.3}), b = make_pt({1.2, 0.4}), c = make_pt({-0.5, 0.9});
  for (auto _ : state) benchmark::DoNotOptimize(flux(fs.B, a, b, c));
}
BENCHMARK(BM_FluxSinusoidal);

static void BM_WeylOp(benchmark::State& state) {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const int M = static_cast<int>(state.range(0));
  const PhaseGrid g(BoxGrid(2, 2.5, M), 0.125);
  Symbol f = symbol_preset("gaussian:1", 2);
  f.cache(g);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_op(fs.A, 0.125, f, g));
}
BENCHMARK(BM_WeylOp)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_BerezinOp(benchmark::State& state) {
  const FieldSetup fs = field_preset("constant:1", "symmetric", 2);
  const int M = static_cast<int>(state.range(0));
  const PhaseGrid g(BoxGrid(2, 2.5, M), 0.125);
  const Symbol f = symbol_preset("gaussian:1", 2);
  const FiducialVector v = FiducialVector::gaussian(2);
  for (auto _ : state) benchmark::DoNotOptimize(berezin_op(fs.A, v, 0.125, f, g));
}
BENCHMARK(BM_BerezinOp)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_OperatorNorm(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const PhaseGrid g(BoxGrid(2, 3.0, M), 0.25);
  const OperatorMatrix op = weyl_op(VectorPotential::zero(2), 0.25, symbol_preset("gaussian:1", 2), g);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(op));
}
BENCHMARK(BM_OperatorNorm)->Arg(24)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
