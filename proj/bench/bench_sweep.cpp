// Serial reference loop vs OpenMP-parallel loop over independent seeded runs.

#include <benchmark/benchmark.h>

#include "rushsim/harness.hpp"

namespace {

rushsim::ExperimentConfig bench_config() {
  rushsim::ExperimentConfig cfg;
  cfg.n_nodes = 50;
  cfg.placement = rushsim::Placement::NearReceiver;
  cfg.duration = 60.0;
  cfg.runs = 8;
  return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) {
    auto out = rushsim::run_sweep({cfg}, rushsim::Execution::Serial);
    benchmark::DoNotOptimize(out.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.runs));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) {
    auto out = rushsim::run_sweep({cfg}, rushsim::Execution::Parallel);
    benchmark::DoNotOptimize(out.rows.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cfg.runs));
}

void BM_SingleRun(benchmark::State& state) {
  auto cfg = bench_config();
  cfg.duration = static_cast<double>(state.range(0));
  for (auto _ : state) {
    auto row = rushsim::run_single(cfg, 0);
    benchmark::DoNotOptimize(row.metrics.pdr.value);
  }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SingleRun)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
