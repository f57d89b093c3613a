#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "lwa/dcf.hpp"
#include "lwa/mc_sim.hpp"

using namespace lwa;

namespace {
sim::SimConfig make_config(int l, std::uint64_t slots, std::uint64_t seed) {
  sim::SimConfig cfg;
  cfg.dcf.num_competitors = l;
  cfg.horizon_slots = slots;
  cfg.warmup_slots = slots / 10;
  cfg.seed = seed;
  return cfg;
}
}  // namespace

TEST_CASE("no competitors: never collides, off time is a pure backoff") {
  auto cfg = make_config(0, 200000, 3);
  const auto res = sim::simulate_dcf(cfg);
  CHECK(res.p_c_hat == 0.0);
  CHECK(res.tagged_collisions == 0);
  // Every packet succeeds at stage 0 (set off by at most one boundary gap).
  for (std::size_t k = 1; k < res.off.retrans_hist.size(); ++k)
    CHECK(res.off.retrans_hist[k] == 0);
  CHECK(res.off.retrans_hist[0] >= res.off.samples);
  CHECK(res.off.retrans_hist[0] <= res.off.samples + 2);
  // Mean off time: (W0-1)/2 idle minislots.
  const double want = 0.5 * (cfg.dcf.w0 - 1) * cfg.dcf.idle_slot;
  CHECK(res.off.mean == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("identical seed and config reproduce bit-identical statistics") {
  const auto a = sim::simulate_dcf(make_config(4, 100000, 42));
  const auto b = sim::simulate_dcf(make_config(4, 100000, 42));
  CHECK(a.tau_hat == b.tau_hat);
  CHECK(a.p_c_hat == b.p_c_hat);
  CHECK(a.off.mean == b.off.mean);
  CHECK(a.off.samples == b.off.samples);
  CHECK(a.off.retrans_hist == b.off.retrans_hist);

  const auto c = sim::simulate_dcf(make_config(4, 100000, 43));
  CHECK(a.tau_hat != c.tau_hat);
}

TEST_CASE("moderate-length run tracks the fixed point") {
  auto cfg = make_config(5, 300000, 7);
  const auto res = sim::simulate_dcf(cfg);
  const auto pt = dcf::solve_fixed_point(cfg.dcf);
  CHECK(std::abs(res.tau_hat - pt.transmit_prob) < 0.05 * pt.transmit_prob);
  CHECK(std::abs(res.p_c_hat - pt.collision_prob) < 0.05 * pt.collision_prob);
  const dcf::OffTimeModel off(cfg.dcf, pt);
  CHECK(std::abs(res.off.mean - off.mean()) < 0.06 * off.mean());
}

TEST_CASE("empirical mgf matches the analytic pgf on the per-second grid") {
  // Durations are SI seconds, so x in [-0.5, 0.5] 1/s keeps x*t_off in the
  // bulk-dominated regime where a sample MGF is a consistent estimator.
  auto cfg = make_config(5, 3000000, 11);
  for (int i = 0; i <= 10; ++i) cfg.mgf_grid.push_back(-0.5 + 0.1 * i);
  const auto res = sim::simulate_dcf(cfg);
  REQUIRE(res.off.samples >= 100000);
  const dcf::OffTimeModel off(cfg.dcf, dcf::solve_fixed_point(cfg.dcf));
  for (std::size_t i = 0; i < cfg.mgf_grid.size(); ++i) {
    const double model = off.pgf(std::exp(cfg.mgf_grid[i]));
    CHECK(std::abs(res.off.mgf_values[i] - model) < 0.05 * model);
  }
}

TEST_CASE("sample recording and binary dump round trip") {
  auto cfg = make_config(2, 50000, 5);
  cfg.keep_samples = true;
  const auto res = sim::simulate_dcf(cfg);
  REQUIRE(res.off_samples.size() == res.off.samples);
  double mean = 0;
  for (double v : res.off_samples) mean += v;
  mean /= static_cast<double>(res.off_samples.size());
  CHECK(mean == doctest::Approx(res.off.mean).epsilon(1e-12));
}

TEST_CASE("queue: zero arrivals never violate") {
  auto cfg = make_config(3, 100000, 9);
  sim::QueueConfig q;
  q.arrival_rate = 0.0;
  q.service_rate = 1e6;
  q.delay_bound = 0.01;
  q.horizon_slots = cfg.horizon_slots;
  q.warmup_slots = cfg.warmup_slots;
  q.seed = cfg.seed;
  const auto res = sim::simulate_onoff_queue(cfg, q);
  CHECK(res.violation_prob == 0.0);
}

TEST_CASE("queue: violation probability nondecreasing in the arrival rate") {
  auto cfg = make_config(3, 400000, 13);
  const auto pt = dcf::solve_fixed_point(cfg.dcf);
  const dcf::OffTimeModel off(cfg.dcf, pt);
  const double peak = 1e7;
  const double mean_rate = peak * cfg.dcf.success_slot / (cfg.dcf.success_slot + off.mean());

  double prev = -1.0;
  for (const double frac : {0.3, 0.5, 0.7, 0.85, 0.95}) {
    sim::QueueConfig q;
    q.arrival_rate = frac * mean_rate;
    q.service_rate = peak;
    q.delay_bound = 0.02;
    q.horizon_slots = cfg.horizon_slots;
    q.warmup_slots = cfg.warmup_slots;
    q.seed = cfg.seed;
    const auto res = sim::simulate_onoff_queue(cfg, q);
    CHECK(res.violation_prob >= prev - 1e-12);
    prev = res.violation_prob;
  }
}

TEST_CASE("queue rejects unstable arrival rates") {
  auto cfg = make_config(3, 100000, 1);
  const auto pt = dcf::solve_fixed_point(cfg.dcf);
  const dcf::OffTimeModel off(cfg.dcf, pt);
  const double peak = 1e6;
  const double mean_rate = peak * cfg.dcf.success_slot / (cfg.dcf.success_slot + off.mean());
  sim::QueueConfig q;
  q.arrival_rate = mean_rate * 1.01;
  q.service_rate = peak;
  q.delay_bound = 0.1;
  q.horizon_slots = cfg.horizon_slots;
  q.warmup_slots = cfg.warmup_slots;
  CHECK_THROWS_AS(sim::simulate_onoff_queue(cfg, q), std::invalid_argument);
}

TEST_CASE("config validation") {
  sim::SimConfig cfg;
  cfg.horizon_slots = 100;
  cfg.warmup_slots = 100;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
