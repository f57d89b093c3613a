#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lwa/dcf.hpp"

using namespace lwa::dcf;

namespace {

DcfParams make_params(int w0, int k, int l, double sigma = 0.09, double ts = 1.0,
                      double tc = 1.0) {
  DcfParams p;
  p.w0 = w0;
  p.max_attempts = k;
  p.num_competitors = l;
  p.idle_slot = sigma;
  p.success_slot = ts;
  p.collision_slot = tc;
  return p;
}

DcfParams random_params(std::mt19937& gen) {
  std::uniform_int_distribution<int> w0(1, 64), k(1, 8), l(0, 12);
  std::uniform_real_distribution<double> sig(0.02, 0.5), dur(1.0, 4.0);
  const double s = sig(gen);
  return make_params(w0(gen), k(gen), l(gen), s, s + dur(gen), s + dur(gen));
}

}  // namespace

TEST_CASE("fixed point: no competitors collapses to a single stage") {
  const auto p = make_params(16, 7, 0);
  const auto pt = solve_fixed_point(p);
  CHECK(pt.collision_prob == 0.0);
  CHECK(pt.transmit_prob == doctest::Approx(2.0 / 17.0).epsilon(1e-12));

  const auto p32 = make_params(32, 3, 0);
  CHECK(solve_fixed_point(p32).transmit_prob == doctest::Approx(2.0 / 33.0).epsilon(1e-12));
}

TEST_CASE("fixed point matches an independent damped iteration (L=4, W0=16, K=7)") {
  const auto p = make_params(16, 7, 4);
  const auto pt = solve_fixed_point(p);

  // Test-local oracle: same coupled equations, straightforward iteration.
  double pc = 0.25;
  for (int i = 0; i < 20000; ++i) {
    double att = 0, boff = 0, pk = 1;
    for (int k = 0; k < p.max_attempts; ++k) {
      att += pk;
      boff += pk * 0.5 * (std::ldexp(static_cast<double>(p.w0), k) - 1.0);
      pk *= pc;
    }
    const double tau = att / (att + boff);
    pc = 0.5 * pc + 0.5 * (1.0 - std::pow(1.0 - tau, p.num_competitors));
  }
  CHECK(pt.collision_prob == doctest::Approx(pc).epsilon(1e-9));

  // consistency invariant
  CHECK(pt.collision_prob ==
        doctest::Approx(1.0 - std::pow(1.0 - pt.transmit_prob, 4)).epsilon(1e-10));
}

TEST_CASE("fixed point: collision probability strictly increases with L") {
  double prev = 0.0;
  for (int l = 1; l <= 10; ++l) {
    const auto pt = solve_fixed_point(make_params(16, 7, l));
    CHECK(pt.collision_prob > prev);
    prev = pt.collision_prob;
  }
}

TEST_CASE("fixed point consistency across random parameters") {
  std::mt19937 gen(7);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(gen);
    const auto pt = solve_fixed_point(p);
    CHECK(pt.transmit_prob >= 0.0);
    CHECK(pt.transmit_prob <= 1.0);
    const double rhs = 1.0 - std::pow(1.0 - pt.transmit_prob, p.num_competitors);
    CHECK(std::abs(pt.collision_prob - rhs) < 1e-10);
  }
}

TEST_CASE("slot pmf examples") {
  const auto p1 = make_params(16, 7, 1);
  const auto idle = slot_pmf({0.0, 0.0}, p1);
  CHECK(idle.idle == 1.0);
  CHECK(idle.success == 0.0);
  CHECK(idle.collision == 0.0);

  const auto one = slot_pmf({0.5, 0.5}, p1);
  CHECK(one.idle == doctest::Approx(0.5));
  CHECK(one.success == doctest::Approx(0.5));
  CHECK(one.collision == doctest::Approx(0.0));

  const auto p3 = make_params(16, 7, 3);
  const auto three = slot_pmf({0.2, 0.488}, p3);
  CHECK(three.idle == doctest::Approx(0.512).epsilon(1e-12));
  CHECK(three.success == doctest::Approx(0.384).epsilon(1e-12));
  CHECK(three.collision == doctest::Approx(0.104).epsilon(1e-12));
}

TEST_CASE("slot pmf sums to one across random parameters") {
  std::mt19937 gen(11);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(gen);
    const auto pt = solve_fixed_point(p);
    const auto pmf = slot_pmf(pt, p);
    CHECK(std::abs(pmf.idle + pmf.success + pmf.collision - 1.0) < 1e-12);
  }
}

TEST_CASE("retransmission pmf examples") {
  const auto p4 = make_params(16, 4, 3);
  const auto zero = retransmission_pmf({0.1, 0.0}, p4);
  CHECK(zero[0] == 1.0);
  CHECK(zero[1] == 0.0);

  const auto p1 = make_params(16, 1, 3);
  const auto single = retransmission_pmf({0.1, 0.7}, p1);
  REQUIRE(single.size() == 1);
  CHECK(single[0] == 1.0);

  const auto pk = retransmission_pmf({0.1, 0.3}, p4);
  CHECK(pk[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(pk[1] == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(pk[2] == doctest::Approx(0.063).epsilon(1e-12));
  CHECK(pk[3] == doctest::Approx(0.027).epsilon(1e-12));
  double sum = 0;
  for (double v : pk) sum += v;
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("retransmission pmf sums to one across random parameters") {
  std::mt19937 gen(13);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_params(gen);
    const auto pt = solve_fixed_point(p);
    const auto pk = retransmission_pmf(pt, p);
    double sum = 0;
    for (double v : pk) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("slot pgf examples") {
  const auto p = make_params(16, 7, 3, 9.0, 100.0, 100.0);  // microsecond units
  const auto pmf = slot_pmf({0.2, 0.488}, p);

  CHECK(slot_pgf(1.0, pmf, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(slot_pgf(1.3, SlotPmf{1.0, 0.0, 0.0}, p) ==
        doctest::Approx(std::pow(1.3, 9.0)).epsilon(1e-12));

  // extended-precision oracle for the three-term sum at z = e^{0.01}
  const long double z = std::exp(0.01L);
  const long double want = 0.512L * std::pow(z, 9.0L) + 0.384L * std::pow(z, 100.0L) +
                           0.104L * std::pow(z, 100.0L);
  CHECK(slot_pgf(std::exp(0.01), pmf, p) ==
        doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
}

TEST_CASE("off-time pgf normalization and degenerate window") {
  std::mt19937 gen(17);
  for (int i = 0; i < 40; ++i) {
    const auto p = random_params(gen);
    const OffTimeModel off(p, solve_fixed_point(p));
    CHECK(std::abs(off.pgf(1.0) - 1.0) < 1e-12);
  }

  // K = 1, W0 = 1: no backoff, no collisions counted -> identically 1
  const auto degenerate = make_params(1, 1, 5);
  const OffTimeModel off(degenerate, solve_fixed_point(degenerate));
  for (const double z : {0.5, 1.0, 2.0, 10.0}) CHECK(off.pgf(z) == doctest::Approx(1.0));
}

TEST_CASE("off-time mean equals the pgf derivative at one") {
  const auto p = make_params(16, 7, 5);
  const OffTimeModel off(p, solve_fixed_point(p));
  const double h = 1e-7;
  const double deriv = (off.pgf(1.0 + h) - off.pgf(1.0 - h)) / (2.0 * h);
  CHECK(off.mean() == doctest::Approx(deriv).epsilon(1e-6));
}

TEST_CASE("cycle transform: zero point, round trips, monotone, convex") {
  const auto p = make_params(16, 7, 5);
  const OffTimeModel off(p, solve_fixed_point(p));

  CHECK(off.cycle_log_mgf(0.0) == 0.0);
  CHECK(off.cycle_log_mgf_inverse(0.0) == 0.0);

  for (const double x : {-0.5, -0.1, 0.1, 0.5}) {
    const double back = off.cycle_log_mgf_inverse(off.cycle_log_mgf(x));
    CHECK(std::abs(back - x) < 1e-9);
  }

  // strictly increasing + numerically convex on a 100-point grid
  const double lo = -1.0, hi = 1.0, step = (hi - lo) / 99.0;
  std::vector<double> f;
  for (int i = 0; i < 100; ++i) f.push_back(off.cycle_log_mgf(lo + i * step));
  for (int i = 1; i < 100; ++i) CHECK(f[i] > f[i - 1]);
  for (int i = 1; i + 1 < 100; ++i) CHECK(f[i + 1] - 2 * f[i] + f[i - 1] >= -1e-8);
}

TEST_CASE("cycle transform inverse rejects unachievable targets") {
  const auto p = make_params(16, 7, 5);
  const OffTimeModel off(p, solve_fixed_point(p));
  CHECK_THROWS_AS(off.cycle_log_mgf_inverse(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(off.cycle_log_mgf_inverse(std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("parameter validation") {
  DcfParams p;
  p.w0 = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = DcfParams{};
  p.idle_slot = 2e-3;  // larger than the 1 ms transmission slots
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = DcfParams{};
  p.num_competitors = -1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  const auto fp = DcfParams::from_payload(12000.0, 12e6, 4);
  CHECK(fp.success_slot == doctest::Approx(1e-3));
  CHECK(fp.num_competitors == 4);
}
