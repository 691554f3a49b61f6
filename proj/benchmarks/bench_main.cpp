#include <becflow/analysis.hpp>
#include <becflow/constants.hpp>
#include <becflow/dynamics.hpp>
#include <becflow/spectral.hpp>

#include <benchmark/benchmark.h>

using namespace becflow;

namespace {

PhysicalConfig config(int dimension) {
  auto p = default_config();
  p.dimension = dimension;
  p.a_B = constants::a_rb;
  return p;
}

// Single rate evaluation, including panel selection.
void BM_RateScalar(benchmark::State& state) {
  const auto m = make_model(config(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(rate(m, 1e-3));
}
BENCHMARK(BM_RateScalar)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

// Rate on a uniform grid over the observation window.
void BM_RateTrace(benchmark::State& state) {
  const auto p = config(3);
  const auto m = make_model(p);
  const auto grid = uniform_grid(observation_window(p), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rate_trace(m, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RateTrace)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);

void BM_DecoherenceTrace(benchmark::State& state) {
  const auto p = config(3);
  const auto m = make_model(p);
  const auto grid = uniform_grid(observation_window(p), 2001);
  for (auto _ : state) benchmark::DoNotOptimize(decoherence_trace(m, grid));
}
BENCHMARK(BM_DecoherenceTrace)->Unit(benchmark::kMillisecond);

void BM_Measure(benchmark::State& state) {
  const auto p = config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(measure(p));
}
BENCHMARK(BM_Measure)->DenseRange(1, 3)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_ToyClassify(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(toy_classify({2.5, 1.0}));
}
BENCHMARK(BM_ToyClassify)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
