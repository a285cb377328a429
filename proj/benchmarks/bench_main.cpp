#include <benchmark/benchmark.h>

#include "levycouple/analysis.hpp"
#include "levycouple/coupling.hpp"
#include "levycouple/simulator.hpp"
#include "levycouple/tv_oracle.hpp"

using namespace levycouple;

namespace {

void BM_SampleTerminal(benchmark::State& state) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const double eps = 1.0 / static_cast<double>(state.range(0));
  RngStream stream(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_terminal_value(m, eps, 1.0, stream));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_SampleTerminal)->Arg(100)->Arg(1000)->Arg(10000);

void BM_PowerLogJump(benchmark::State& state) {
  const auto m = SymmetricLevyMeasure::power_log(0.5);
  RngStream stream(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.sample_jump(1e-3, stream.uniform(), false));
  }
}
BENCHMARK(BM_PowerLogJump);

void BM_CouplingReplication(benchmark::State& state) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  const CouplingSetup setup{0.3, 0.03, 0.005, 1.0, 64.0};
  std::uint64_t rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_replication(m, setup, 1, rep++));
  }
}
BENCHMARK(BM_CouplingReplication);

void BM_ConditionIntegral(benchmark::State& state) {
  const auto m = state.range(0) == 0 ? SymmetricLevyMeasure::stable(1.0, 1.0)
                                     : SymmetricLevyMeasure::power_log(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(condition_integral(m));
}
BENCHMARK(BM_ConditionIntegral)->Arg(0)->Arg(1);

void BM_CharFn(benchmark::State& state) {
  const auto m = SymmetricLevyMeasure::stable(1.0, 1.0);
  double u = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(char_fn(m, u));
    u = u < 8.0 ? u * 1.01 : 0.5;
  }
}
BENCHMARK(BM_CharFn);

void BM_OracleDensity(benchmark::State& state) {
  const DensityInverter inverter(SymmetricLevyMeasure::stable(1.0, 1.0));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverter.density(x));
    x = x < 100.0 ? x + 0.37 : 0.0;
  }
}
BENCHMARK(BM_OracleDensity);

}  // namespace
BENCHMARK_MAIN();
