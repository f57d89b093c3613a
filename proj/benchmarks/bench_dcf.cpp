#include <benchmark/benchmark.h>

#include "lwa/dcf.hpp"

namespace {

lwa::dcf::DcfParams params(int l) {
  lwa::dcf::DcfParams p;
  p.num_competitors = l;
  return p;
}

void BM_FixedPoint(benchmark::State& state) {
  const auto p = params(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lwa::dcf::solve_fixed_point(p));
}
BENCHMARK(BM_FixedPoint)->Arg(2)->Arg(10);

void BM_CycleLogMgf(benchmark::State& state) {
  const auto p = params(5);
  const lwa::dcf::OffTimeModel off(p, lwa::dcf::solve_fixed_point(p));
  double x = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(off.cycle_log_mgf(x));
  }
}
BENCHMARK(BM_CycleLogMgf);

void BM_CycleLogMgfInverse(benchmark::State& state) {
  const auto p = params(5);
  const lwa::dcf::OffTimeModel off(p, lwa::dcf::solve_fixed_point(p));
  for (auto _ : state) benchmark::DoNotOptimize(off.cycle_log_mgf_inverse(0.05));
}
BENCHMARK(BM_CycleLogMgfInverse);

}  // namespace
