#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "qslab/estimates.hpp"
#include "qslab/evolve.hpp"
#include "qslab/hamflow.hpp"
#include "qslab/psido.hpp"
#include "qslab/symbol_library.hpp"

using namespace qslab;

namespace {

GridFunction gaussian(const Grid& g) {
  return GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-x[0] * x[0]), 0.0); });
}

void BM_FreeEvolve1D(benchmark::State& state) {
  const Grid g = make_grid(1, 32.0, static_cast<int>(state.range(0)));
  const GridFunction u0 = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(free_evolve(u0, 0.5));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FreeEvolve1D)->RangeMultiplier(4)->Range(256, 65536)->Complexity(benchmark::oNLogN);

void BM_FreeEvolve2D(benchmark::State& state) {
  const Grid g = make_grid(2, 8.0, static_cast<int>(state.range(0)));
  const GridFunction u0 = GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-x[0] * x[0] - x[1] * x[1])); });
  for (auto _ : state) benchmark::DoNotOptimize(free_evolve(u0, 0.5));
}
BENCHMARK(BM_FreeEvolve2D)->Arg(64)->Arg(128)->Arg(256);

void BM_Quantize(benchmark::State& state) {
  const Grid g = make_grid(1, 8.0 * std::numbers::pi, static_cast<int>(state.range(0)));
  const Symbol a = symbols::variable_1d();
  for (auto _ : state) benchmark::DoNotOptimize(quantize(a, g));
}
BENCHMARK(BM_Quantize)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BandNorm(benchmark::State& state) {
  const Grid g = make_grid(1, 8.0 * std::numbers::pi, static_cast<int>(state.range(0)));
  const DenseOperator a = quantize(symbols::variable_1d(), g);
  for (auto _ : state) benchmark::DoNotOptimize(band_norm(a, 4.0, 1e300));
}
BENCHMARK(BM_BandNorm)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_FlowRK4(benchmark::State& state) {
  const Symbol h = symbols::annular_well();
  const PhasePoint seed{{3.25, 0.0}, {0.0, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(integrate_flow(h, seed, 10.0, 1e-3));
}
BENCHMARK(BM_FlowRK4)->Unit(benchmark::kMillisecond);

void BM_Commutator(benchmark::State& state) {
  const Grid g = make_grid(1, std::numbers::pi, static_cast<int>(state.range(0)));
  const GridFunction f = gaussian(g);
  const GridFunction q = GridFunction::sample(g, [](const Point& x) { return Complex(std::cos(3 * x[0])); });
  for (auto _ : state) benchmark::DoNotOptimize(commutator_ratio(f, q, 0.5));
}
BENCHMARK(BM_Commutator)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
