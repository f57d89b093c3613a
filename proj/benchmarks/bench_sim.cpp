#include <benchmark/benchmark.h>

#include "lwa/mc_sim.hpp"

namespace {

void BM_SimulateDcf(benchmark::State& state) {
  lwa::sim::SimConfig cfg;
  cfg.dcf.num_competitors = static_cast<int>(state.range(0));
  cfg.horizon_slots = 100000;
  cfg.warmup_slots = 1000;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lwa::sim::simulate_dcf(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon_slots);
}
BENCHMARK(BM_SimulateDcf)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
