#include <benchmark/benchmark.h>

#include "pidlab/suites.hpp"

using namespace pidlab;

namespace {

void mmi_sweep(benchmark::State& state, Execution exec) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mmi_bound_sweep(catalogue(), DirichletRandom{{3, 3, 3}, 1.0, 0}, trials, 1, exec));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}

void consistency_sweep(benchmark::State& state, Execution exec) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_suite("consistency", trials, 1, {}, exec));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
}

}  // namespace

BENCHMARK_CAPTURE(mmi_sweep, serial, Execution::Serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mmi_sweep, parallel, Execution::Parallel)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_CAPTURE(consistency_sweep, serial, Execution::Serial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(consistency_sweep, parallel, Execution::Parallel)
    ->Arg(64)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
