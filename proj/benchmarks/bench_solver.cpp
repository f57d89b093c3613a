#include <benchmark/benchmark.h>

#include "lwa/experiment.hpp"
#include "lwa/scheduler.hpp"

namespace {

void BM_SolveBcd(benchmark::State& state) {
  auto spec = lwa::xp::fig2_spec();
  spec.user_count = static_cast<int>(state.range(0));
  spec.unlicensed_budget = 5e6;
  const auto scenario = lwa::xp::generate_scenario(spec, 4.0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(lwa::opt::solve_bcd(scenario));
}
BENCHMARK(BM_SolveBcd)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
