#include <benchmark/benchmark.h>

#include "lwa/dcf.hpp"
#include "lwa/effective_capacity.hpp"

namespace {

void BM_UnlicensedCapacity(benchmark::State& state) {
  lwa::dcf::DcfParams p;
  p.num_competitors = 5;
  const lwa::dcf::OffTimeModel off(p, lwa::dcf::solve_fixed_point(p));
  for (auto _ : state)
    benchmark::DoNotOptimize(lwa::ec::unlicensed_capacity(2e6, 1e-5, 10.0, off));
}
BENCHMARK(BM_UnlicensedCapacity);

void BM_LicensedCapacity(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(lwa::ec::licensed_capacity(1e6, 1e-5, 10.0, 1e-3));
}
BENCHMARK(BM_LicensedCapacity);

void BM_LicensedMoments(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(lwa::ec::licensed_exp_moments(15.0, 10.0, 1e-3));
}
BENCHMARK(BM_LicensedMoments);

}  // namespace
