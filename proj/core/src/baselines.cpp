#include "lwa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lwa/effective_capacity.hpp"
#include "lwa/numerics.hpp"

namespace lwa::baselines {

using opt::kLicensed;
using opt::kUnlicensed;

void BaselineConfig::validate() const {
  if (gamma_split < 0.0 || gamma_split > 1.0)
    throw std::invalid_argument("BaselineConfig: gamma_split must be in [0,1]");
}

namespace {

// Per-band helper: decay-rate target q, the delta achieving it, and the
// minimal bandwidth serving a rate target with theta at delay equality
// (theta = delta*/beta, so capacity is q/theta = q beta/delta*).
struct BandPlan {
  double q = 0.0;       // required decay rate
  double delta = 0.0;   // Psi^{-1}(q)
  double per_hz = 0.0;  // capacity per Hz at delay equality: q/delta*
};

class Planner {
 public:
  explicit Planner(const Scenario& s)
      : scenario_(s), off_(s.dcf, dcf::solve_fixed_point(s.dcf)) {}

  BandPlan plan(int band, int user) const {
    const auto& qos = scenario_.users[user].qos;
    BandPlan p;
    p.q = std::log(1.0 / (qos.violation_prob * (1.0 - 1e-9))) / qos.delay_bound;
    if (band == kUnlicensed) {
      const double c1 = std::log2(1.0 + scenario_.users[user].snr_unlicensed) *
                        scenario_.dcf.success_slot;
      p.delta = off_.cycle_log_mgf(p.q) / c1;
    } else {
      double hi = 1.0;
      int grow = 0;
      auto psi2 = [&](double d) {
        return ec::licensed_decay_rate(d, scenario_.users[user].snr_licensed,
                                       scenario_.frame_length);
      };
      while (psi2(hi) < p.q) {
        hi *= 2.0;
        if (++grow > 200) throw std::runtime_error("baseline: no licensed decay bracket");
      }
      p.delta = num::bisect([&](double d) { return psi2(d) - p.q; }, 0.0, hi, 80);
    }
    p.per_hz = p.q / p.delta;
    return p;
  }

  // Minimum bandwidth meeting `rate` on this band, theta at delay equality
  // (outer bisection on beta; capacity at the equality theta is q beta/delta*).
  double min_bandwidth(const BandPlan& p, double rate) const {
    if (rate <= 0.0) return 0.0;
    auto cap = [&](double beta) { return beta > 0.0 ? p.per_hz * beta : 0.0; };
    double hi = 1.0;
    int grow = 0;
    while (cap(hi) < rate) {
      hi *= 2.0;
      if (++grow > 200) throw std::runtime_error("baseline: no bandwidth bracket");
    }
    return num::bisect([&](double b) { return cap(b) - rate; }, 0.0, hi, 80);
  }

  const dcf::OffTimeModel& off() const { return off_; }

 private:
  const Scenario& scenario_;
  dcf::OffTimeModel off_;
};

void set_band(opt::Allocation& alloc, int user, int band, double beta, const BandPlan& p) {
  auto& b = alloc.users[user][band];
  if (beta <= 0.0) {
    b = {0.0, 0.0, 0.0};
    return;
  }
  b.x = 1.0;
  b.delta = p.delta;
  b.a = beta / p.delta;  // theta = delta*/beta
}

bool exceeds_cap(const Scenario& s, double beta) {
  return s.big_m > 0.0 && beta > s.big_m * (1.0 + 1e-9);
}

void finalize(const Scenario& scenario, BaselineResult& out) {
  out.licensed_bandwidth = out.alloc.licensed_bandwidth();
  const auto feas = opt::check_allocation(scenario, out.alloc);
  out.feasible = feas.ok();
  if (!out.feasible && out.message.empty()) {
    std::ostringstream msg;
    msg << "feasibility check failed: rate " << feas.rate_violation << ", budget "
        << feas.budget_violation << ", qos " << feas.qos_exact_violation;
    out.message = msg.str();
  }
  // Capacities for reporting.
  Planner planner(scenario);
  out.alloc.capacity.assign(out.alloc.users.size(), {0.0, 0.0});
  for (std::size_t n = 0; n < out.alloc.users.size(); ++n)
    for (int m = 0; m < 2; ++m) {
      const auto& b = out.alloc.users[n][m];
      if (b.delta > 0.0 && b.a > 0.0) {
        const auto p = planner.plan(m, static_cast<int>(n));
        // theta C = q at delay equality by construction
        out.alloc.capacity[n][m] = b.a * p.q;
      }
    }
}

}  // namespace

BaselineResult run_sas(const Scenario& scenario) {
  scenario.validate();
  Planner planner(scenario);
  const int n_users = static_cast<int>(scenario.users.size());

  BaselineResult out;
  out.alloc.users.assign(n_users, {});
  for (auto& u : out.alloc.users) u = {opt::BandDecision{0, 0, 0}, opt::BandDecision{0, 0, 0}};

  std::vector<int> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scenario.users[a].snr_unlicensed > scenario.users[b].snr_unlicensed;
  });

  double b_rem = scenario.unlicensed_budget;
  for (int n : order) {
    const double rate = scenario.users[n].qos.min_rate * (1.0 + 1e-9);
    const auto p1 = planner.plan(kUnlicensed, n);
    const double beta1_req = planner.min_bandwidth(p1, rate);

    if (beta1_req <= b_rem) {
      set_band(out.alloc, n, kUnlicensed, beta1_req, p1);
      b_rem -= beta1_req;
      continue;
    }
    const auto p2 = planner.plan(kLicensed, n);
    if (b_rem > 1e-12 * std::max(1.0, scenario.unlicensed_budget)) {
      // Straddler: residual unlicensed plus a licensed top-up; both bands at
      // delay equality keep the aggregate ratio at the budget.
      set_band(out.alloc, n, kUnlicensed, b_rem, p1);
      const double c1 = p1.per_hz * b_rem;
      const double rate2 = rate - c1;
      if (rate2 > 0.0) {
        const double beta2 = planner.min_bandwidth(p2, rate2);
        if (exceeds_cap(scenario, beta2)) {
          out.message = "straddling user exceeds the licensed cap";
          return out;
        }
        set_band(out.alloc, n, kLicensed, beta2, p2);
      }
      b_rem = 0.0;
      continue;
    }
    const double beta2 = planner.min_bandwidth(p2, rate);
    if (exceeds_cap(scenario, beta2)) {
      std::ostringstream msg;
      msg << "user " << n << " unserviceable licensed-only within the cap";
      out.message = msg.str();
      return out;
    }
    set_band(out.alloc, n, kLicensed, beta2, p2);
  }

  finalize(scenario, out);
  return out;
}

BaselineResult run_sms(const Scenario& scenario, const BaselineConfig& config) {
  scenario.validate();
  config.validate();
  Planner planner(scenario);
  const int n_users = static_cast<int>(scenario.users.size());

  BaselineResult out;
  out.alloc.users.assign(n_users, {});
  for (auto& u : out.alloc.users) u = {opt::BandDecision{0, 0, 0}, opt::BandDecision{0, 0, 0}};

  std::vector<BandPlan> p1(n_users), p2(n_users);
  std::vector<double> beta1(n_users, 0.0), rate2(n_users, 0.0);
  for (int n = 0; n < n_users; ++n) {
    const double rate = scenario.users[n].qos.min_rate * (1.0 + 1e-9);
    const double r1 = config.gamma_split * rate;
    rate2[n] = rate - r1;
    p1[n] = planner.plan(kUnlicensed, n);
    p2[n] = planner.plan(kLicensed, n);
    beta1[n] = planner.min_bandwidth(p1[n], r1);
  }

  const double total1 = std::accumulate(beta1.begin(), beta1.end(), 0.0);
  if (total1 > scenario.unlicensed_budget && total1 > 0.0) {
    // Proportional rescale; the lost unlicensed rate moves to band 2.
    const double s = scenario.unlicensed_budget / total1;
    for (int n = 0; n < n_users; ++n) {
      const double served_before = p1[n].per_hz * beta1[n];
      beta1[n] *= s;
      rate2[n] += served_before - p1[n].per_hz * beta1[n];
    }
  }

  for (int n = 0; n < n_users; ++n) {
    set_band(out.alloc, n, kUnlicensed, beta1[n], p1[n]);
    const double beta2 = planner.min_bandwidth(p2[n], rate2[n]);
    if (exceeds_cap(scenario, beta2)) {
      std::ostringstream msg;
      msg << "user " << n << " unserviceable licensed-only within the cap";
      out.message = msg.str();
      return out;
    }
    set_band(out.alloc, n, kLicensed, beta2, p2[n]);
  }

  finalize(scenario, out);
  return out;
}

BaselineResult run_baseline(const Scenario& scenario, const BaselineConfig& config) {
  return config.scheme == BaselineConfig::Scheme::sas ? run_sas(scenario)
                                                      : run_sms(scenario, config);
}

}  // namespace lwa::baselines
