// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria.  Criteria may be selected by number on the command line.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lwa/baselines.hpp"
#include "lwa/dcf.hpp"
#include "lwa/effective_capacity.hpp"
#include "lwa/experiment.hpp"
#include "lwa/mc_sim.hpp"
#include "lwa/numerics.hpp"
#include "lwa/scenario.hpp"
#include "lwa/scheduler.hpp"

using namespace lwa;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

// ---------------------------------------------------------------------- 1
Outcome criterion1() {
  Outcome out;
  out.pass = true;
  char buf[256];
  for (const int l : {2, 5, 10}) {
    dcf::DcfParams params;
    params.num_competitors = l;
    const auto t0 = std::chrono::steady_clock::now();
    const auto point = dcf::solve_fixed_point(params);
    const dcf::OffTimeModel off(params, point);

    sim::SimConfig cfg;
    cfg.dcf = params;
    cfg.horizon_slots = 1'000'000;
    cfg.warmup_slots = 10'000;
    cfg.seed = 2024;
    const auto res = sim::simulate_dcf(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double dtau = rel_err(res.tau_hat, point.transmit_prob);
    const double dpc = rel_err(res.p_c_hat, point.collision_prob);
    const double dmean = rel_err(res.off.mean, off.mean());

    const auto pk = dcf::retransmission_pmf(point, params);
    std::uint64_t packets = 0;
    for (auto c : res.off.retrans_hist) packets += c;
    double worst_z = 0.0;
    for (std::size_t k = 0; k < pk.size(); ++k) {
      const double expd = static_cast<double>(packets) * pk[k];
      const double sd =
          std::sqrt(std::max(1e-12, static_cast<double>(packets) * pk[k] * (1.0 - pk[k])));
      worst_z = std::max(worst_z,
                         std::abs((static_cast<double>(res.off.retrans_hist[k]) - expd) / sd));
    }

    const bool ok = dtau <= 0.02 && dpc <= 0.02 && dmean <= 0.03 && worst_z <= 3.0 &&
                    secs <= 300.0;
    std::snprintf(buf, sizeof buf,
                  " L=%d dtau=%.3f%% dpc=%.3f%% dmean=%.3f%% max|z|=%.2f (%.1fs)%s", l,
                  100 * dtau, 100 * dpc, 100 * dmean, worst_z, secs, ok ? "" : " <-FAIL");
    out.detail += buf;
    out.pass = out.pass && ok;
  }
  return out;
}

// ---------------------------------------------------------------------- 2
Outcome criterion2() {
  Outcome out;
  out.pass = true;
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> w0(1, 64), k(1, 8), l(0, 12);
  std::uniform_real_distribution<double> sig(0.02, 0.5), dur(1.0, 4.0);
  double worst_pgf = 0.0, worst_rt = 0.0, worst_convex = 0.0;
  for (int i = 0; i < 30; ++i) {
    dcf::DcfParams p;
    p.w0 = w0(gen);
    p.max_attempts = k(gen);
    p.num_competitors = l(gen);
    p.idle_slot = sig(gen);
    p.success_slot = p.idle_slot + dur(gen);
    p.collision_slot = p.idle_slot + dur(gen);
    const dcf::OffTimeModel off(p, dcf::solve_fixed_point(p));
    worst_pgf = std::max(worst_pgf, std::abs(off.pgf(1.0) - 1.0));
    if (off.cycle_log_mgf(0.0) != 0.0) out.pass = false;
  }
  {
    dcf::DcfParams p;
    p.num_competitors = 5;
    p.idle_slot = 0.09;
    p.success_slot = 1.0;
    p.collision_slot = 1.0;
    const dcf::OffTimeModel off(p, dcf::solve_fixed_point(p));
    std::vector<double> f(100);
    for (int i = 0; i < 100; ++i) {
      const double x = -0.5 + i * (1.0 / 99.0);
      f[i] = off.cycle_log_mgf(x);
      worst_rt = std::max(worst_rt, std::abs(off.cycle_log_mgf_inverse(f[i]) - x));
    }
    for (int i = 1; i < 100; ++i)
      if (f[i] <= f[i - 1]) out.pass = false;
    for (int i = 1; i + 1 < 100; ++i)
      worst_convex = std::max(worst_convex, -(f[i + 1] - 2 * f[i] + f[i - 1]));
  }
  out.pass = out.pass && worst_pgf < 1e-12 && worst_rt < 1e-9 && worst_convex < 1e-8;
  char buf[160];
  std::snprintf(buf, sizeof buf, " |pgf(1)-1|<=%.1e roundtrip<=%.1e convexity_slack<=%.1e",
                worst_pgf, worst_rt, worst_convex);
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------- 3
Outcome criterion3() {
  Outcome out;
  dcf::DcfParams params;
  params.num_competitors = 4;
  const dcf::OffTimeModel off(params, dcf::solve_fixed_point(params));
  const double beta = 2e6, snr = 10.0, frame = 1e-3;

  const double ts = params.success_slot;
  const double limit1 = beta * std::log2(1.0 + snr) * ts / (ts + off.mean());
  const double got1 = ec::unlicensed_capacity(beta, 1e-8, snr, off);
  const double err1 = rel_err(got1, limit1);

  const auto erg = num::integrate_gk15(
      [&](double g, std::span<double> o) {
        o[0] = std::log2(1.0 + g) * std::exp(-g / snr) / snr;
      },
      1, 0.0, snr * std::log(1e12), 1e-11);
  const double limit2 = beta * erg.values[0];
  const double got2 = ec::licensed_capacity(beta, 1e-8, snr, frame);
  const double err2 = rel_err(got2, limit2);

  const double quad = ec::licensed_capacity(1e6, 1e-5, snr, frame);
  std::mt19937_64 mcgen(777);
  std::exponential_distribution<double> gamma(1.0 / snr);
  double acc = 0.0;
  const int n = 10'000'000;
  const double scale = 1e-5 * 1e6 * frame;
  for (int i = 0; i < n; ++i) acc += std::exp(-scale * std::log2(1.0 + gamma(mcgen)));
  const double mc = -std::log(acc / n) / (1e-5 * frame);
  const double err3 = rel_err(quad, mc);

  out.pass = err1 <= 0.01 && err2 <= 0.01 && err3 <= 0.01;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                " small-theta band1 %.3f%%, band2 %.3f%%; quadrature-vs-MC %.3f%%", 100 * err1,
                100 * err2, 100 * err3);
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------- 4
Outcome criterion4() {
  Outcome out;
  out.pass = true;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> snr(2.0, 25.0), a_val(1e3, 1e6);
  std::uniform_int_distribution<int> l(1, 10);
  double worst = -1e300;
  for (int draw = 0; draw < 20; ++draw) {
    dcf::DcfParams p;
    p.num_competitors = l(gen);
    const dcf::OffTimeModel off(p, dcf::solve_fixed_point(p));
    const double g1 = snr(gen), g2 = snr(gen), a = a_val(gen);
    const double c1 = std::log2(1.0 + g1) * p.success_slot;
    const double q = std::log(1.0 / 0.05) / 0.2;
    const double d1_ref = off.cycle_log_mgf(q) / c1;
    // licensed reference delta via bisection
    double hi = 1.0;
    while (ec::licensed_decay_rate(hi, g2, 1e-3) < q) hi *= 2.0;
    const double d2_ref = num::bisect(
        [&](double d) { return ec::licensed_decay_rate(d, g2, 1e-3) - q; }, 0.0, hi, 60);

    for (int band = 0; band < 2; ++band) {
      const double ref = band == 0 ? d1_ref : d2_ref;
      std::vector<double> f(100);
      for (int i = 0; i < 100; ++i) {
        const double d = ref * (0.1 + 3.0 * i / 99.0);
        f[i] = band == 0 ? a * off.cycle_log_mgf_inverse(d * c1)
                         : a * (-std::log(ec::licensed_exp_moments(d, g2, 1e-3, 1e-13).e0) /
                                1e-3);
      }
      for (int i = 1; i + 1 < 100; ++i) {
        const double second = f[i + 1] - 2 * f[i] + f[i - 1];
        worst = std::max(worst, second);
        if (second > 1e-8) out.pass = false;
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, " max second difference %.2e (tolerance 1e-8)", worst);
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------- 5
Outcome criterion5() {
  Outcome out;
  out.pass = true;
  int converged = 0, trace_bad = 0, binarity_bad = 0, feas_bad = 0;
  auto spec = xp::fig2_spec();
  spec.user_count = 4;
  spec.unlicensed_budget = 5e6;
  for (int i = 0; i < 100; ++i) {
    const auto scenario = xp::generate_scenario(spec, 4.0, 1000 + i);
    const auto [alloc, report] = opt::solve_bcd(scenario);
    if (report.status != opt::SolveStatus::converged) continue;
    ++converged;
    for (std::size_t k = 1; k < report.objective_trace.size(); ++k)
      if (report.objective_trace[k] >
          report.objective_trace[k - 1] +
              1e-9 * std::max(1.0, std::abs(report.objective_trace[k - 1])))
        ++trace_bad;
    if (!(report.binarity_residual < 1e-3)) ++binarity_bad;
    if (!report.feasibility.ok(1e-6)) ++feas_bad;
  }
  out.pass = converged == 100 && trace_bad == 0 && binarity_bad == 0 && feas_bad == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                " converged %d/100, trace violations %d, binarity misses %d, infeasible %d",
                converged, trace_bad, binarity_bad, feas_bad);
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------- 6
// Exhaustive oracle for two users over the solver's contract set: binary x,
// relaxed QoS (per-band sum) AND the exact capacity-weighted ratio, rate,
// and budget.  Per user the licensed requirement given (delta1, delta2) is
// closed-form, so the search is a grid over (delta1, delta2, split).
struct UserTables {
  std::vector<double> k1, e1;  // delta1 grid: capacity per Hz, violation
  // delta2 grid sorted by e2 ascending (= delta2 descending, m2 descending):
  std::vector<double> e2, m2;  // violation, Hz per unit capacity
  std::vector<std::vector<double>> gmin;  // sparse range-min of m2/(p - e2)
  std::vector<double> g;
  double rate = 0.0, p = 0.0;
  double best_single1 = 1e300;  // minimal unlicensed bandwidth, band-1 only
  double best_single2 = 1e300;  // minimal licensed bandwidth, band-2 only

  // min of g over indices [lo, hi]
  double range_g(int lo, int hi) const {
    if (lo > hi) return 1e300;
    const int k = 31 - __builtin_clz(static_cast<unsigned>(hi - lo + 1));
    return std::min(gmin[k][lo], gmin[k][hi - (1 << k) + 1]);
  }
  // largest index with e2 <= v (or -1)
  int last_e2_below(double v) const {
    const auto it = std::upper_bound(e2.begin(), e2.end(), v);
    return static_cast<int>(it - e2.begin()) - 1;
  }
};

UserTables build_tables(const Scenario& s, const dcf::OffTimeModel& off, int n, int grid) {
  UserTables t;
  const auto& u = s.users[n];
  t.rate = u.qos.min_rate;
  t.p = u.qos.violation_prob;
  const double d = u.qos.delay_bound;
  const double q = std::log(1.0 / t.p) / d;
  const double c1 = std::log2(1.0 + u.snr_unlicensed) * s.dcf.success_slot;
  const double d1_ref = off.cycle_log_mgf(q) / c1;
  double hi = 1.0;
  while (ec::licensed_decay_rate(hi, u.snr_licensed, s.frame_length) < q) hi *= 2.0;
  const double d2_ref = num::bisect(
      [&](double x) { return ec::licensed_decay_rate(x, u.snr_licensed, s.frame_length) - q; },
      0.0, hi, 60);

  std::vector<std::pair<double, double>> band2;  // (e2, m2)
  for (int i = 0; i < grid; ++i) {
    const double f =
        std::exp(std::log(2e-3) + (std::log(50.0) - std::log(2e-3)) * i / (grid - 1));
    {
      const double delta = d1_ref * f;
      const double psi = off.cycle_log_mgf_inverse(delta * c1);
      t.k1.push_back(psi / delta);
      t.e1.push_back(std::exp(-psi * d));
      if (t.e1.back() <= t.p) t.best_single1 = std::min(t.best_single1, t.rate * delta / psi);
    }
    {
      const double delta = d2_ref * f;
      const double psi = ec::licensed_decay_rate(delta, u.snr_licensed, s.frame_length);
      band2.emplace_back(std::exp(-psi * d), delta / psi);
      if (band2.back().first <= t.p)
        t.best_single2 = std::min(t.best_single2, t.rate * band2.back().second);
    }
  }
  std::sort(band2.begin(), band2.end());
  for (const auto& [e, m] : band2) {
    t.e2.push_back(e);
    t.m2.push_back(m);
    t.g.push_back(e < t.p ? m / (t.p - e) : 1e300);
  }
  // sparse table for range-min over g
  const int n2 = static_cast<int>(t.g.size());
  t.gmin.push_back(t.g);
  for (int k = 1; (1 << k) <= n2; ++k) {
    const auto& prev = t.gmin.back();
    std::vector<double> cur(n2 - (1 << k) + 1);
    for (int i = 0; i + (1 << k) <= n2; ++i)
      cur[i] = std::min(prev[i], prev[i + (1 << (k - 1))]);
    t.gmin.push_back(std::move(cur));
  }
  return t;
}

// Minimal licensed bandwidth for a both-bands user holding unlicensed
// bandwidth b, subject to rate, e1 + e2 <= 2p, and the exact ratio form.
double both_bands_cost(const UserTables& t, double b) {
  const double p = t.p;
  double best = 1e300;
  for (std::size_t i = 0; i < t.k1.size(); ++i) {
    const double e1 = t.e1[i];
    if (e1 >= 2.0 * p) continue;
    const double cap1 = b * t.k1[i];
    const double need = std::max(0.0, t.rate - cap1);
    const double e2_relaxed = 2.0 * p - e1;
    if (e1 <= p) {
      if (need == 0.0) return 0.0;  // feasible with an idle licensed queue
      const double thr = std::min(e2_relaxed, p + cap1 * (p - e1) / need);
      const int j = t.last_e2_below(thr);
      if (j >= 0) best = std::min(best, need * t.m2[j]);
    } else {
      // e2 must stay below both p and 2p - e1; the licensed band needs
      // C2 >= cap1 (e1 - p)/(p - e2) to pull the weighted mean under p.
      const double surplus = cap1 * (e1 - p);
      const int hi = t.last_e2_below(std::nextafter(e2_relaxed, 0.0));
      if (hi < 0) continue;
      if (need > 0.0) {
        const double thr_b1 = p - surplus / need;  // below: C2 = need binds
        const int j1 = thr_b1 > 0 ? std::min(t.last_e2_below(thr_b1), hi) : -1;
        if (j1 >= 0) best = std::min(best, need * t.m2[j1]);
        const int lo = j1 + 1;
        if (lo <= hi) best = std::min(best, surplus * t.range_g(lo, hi));
      } else {
        best = std::min(best, surplus * t.range_g(0, hi));
      }
    }
  }
  return best;
}

double oracle_two_users(const Scenario& s, int grid, int splits) {
  const dcf::OffTimeModel off(s.dcf, dcf::solve_fixed_point(s.dcf));
  const UserTables t0 = build_tables(s, off, 0, grid);
  const UserTables t1 = build_tables(s, off, 1, grid);
  const double b1 = s.unlicensed_budget;

  // prefix-min "use at most b" cost curves over the split grid
  std::vector<double> g0(splits + 1), g1(splits + 1);
  for (int i = 0; i <= splits; ++i) {
    const double b = b1 * i / splits;
    g0[i] = both_bands_cost(t0, b);
    g1[i] = both_bands_cost(t1, b);
    if (i > 0) {
      g0[i] = std::min(g0[i], g0[i - 1]);
      g1[i] = std::min(g1[i], g1[i - 1]);
    }
  }

  double best = 1e300;
  // both users flexible: split the budget
  for (int i = 0; i <= splits; ++i) best = std::min(best, g0[i] + g1[splits - i]);
  // user k band-1 only (needs its minimal share), other flexible or single
  auto with_single1 = [&](const UserTables& a, const std::vector<double>& gb) {
    if (a.best_single1 > b1) return 1e300;
    const double rem = b1 - a.best_single1;
    const int idx = std::min<int>(splits, static_cast<int>(rem / b1 * splits));
    return gb[std::max(0, idx)];
  };
  best = std::min(best, with_single1(t0, g1));
  best = std::min(best, with_single1(t1, g0));
  // band-2-only options
  best = std::min(best, t0.best_single2 + g1[splits]);
  best = std::min(best, t1.best_single2 + g0[splits]);
  best = std::min(best, t0.best_single2 + t1.best_single2);
  if (t0.best_single1 + t1.best_single1 <= b1) best = std::min(best, 0.0);
  return best;
}

Outcome criterion6() {
  Outcome out;
  out.pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  auto spec = xp::fig2_spec();
  spec.user_count = 2;
  spec.unlicensed_budget = 3e6;
  double worst_gap = 0.0;
  int checked = 0;
  for (int i = 0; i < 20; ++i) {
    const auto scenario = xp::generate_scenario(spec, 4.0, 7000 + i);
    const auto [alloc, report] = opt::solve_bcd(scenario);
    if (report.status != opt::SolveStatus::converged) {
      out.pass = false;
      out.detail += " scenario " + std::to_string(i) + " did not converge;";
      continue;
    }
    const double oracle = oracle_two_users(scenario, 2500, 1500);
    ++checked;
    const double scale = std::max(1e4, oracle);
    const double gap = (report.objective - oracle) / scale;
    worst_gap = std::max(worst_gap, std::abs(gap));
    if (std::abs(gap) > 0.02) out.pass = false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, " %d/20 compared, worst |gap| %.3f%% (%.0fs, budget 1800s)",
                checked, 100 * worst_gap, secs);
  out.detail += buf;
  out.pass = out.pass && secs <= 1800.0;
  return out;
}

// ---------------------------------------------------------------------- 7
Outcome criterion7() {
  Outcome out;
  out.pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  char buf[256];

  auto check_sweep = [&](const xp::SweepResult& res, bool increasing, const char* tag) {
    std::vector<double> grid, opt_means;
    std::vector<double> sas_means, sms_means;
    for (const auto& row : res.rows) {
      switch (row.scheme) {
        case xp::Scheme::optimal:
          grid.push_back(row.grid_value);
          opt_means.push_back(row.mean_bandwidth);
          break;
        case xp::Scheme::sas: sas_means.push_back(row.mean_bandwidth); break;
        case xp::Scheme::sms: sms_means.push_back(row.mean_bandwidth); break;
      }
    }
    const double rho = num::spearman(grid, opt_means);
    const double want_rho = increasing ? rho : -rho;
    bool dominance = true;
    double max_gain_sas = 0.0, max_gain_sms = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double tol = 1e-6 * std::max(1.0, std::min(sas_means[i], sms_means[i]));
      if (opt_means[i] > sas_means[i] + tol || opt_means[i] > sms_means[i] + tol)
        dominance = false;
      if (sas_means[i] > 0)
        max_gain_sas = std::max(max_gain_sas, (sas_means[i] - opt_means[i]) / sas_means[i]);
      if (sms_means[i] > 0)
        max_gain_sms = std::max(max_gain_sms, (sms_means[i] - opt_means[i]) / sms_means[i]);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < opt_means.size(); ++i) {
      if (increasing && opt_means[i] < opt_means[i - 1] * (1 - 1e-9)) {}
      if (!increasing &&
          opt_means[i] > opt_means[i - 1] * (1 + 1e-6) + 1e-3)
        monotone = false;
    }
    const bool ok = want_rho > 0.9 && dominance && monotone;
    std::snprintf(buf, sizeof buf,
                  " [%s] spearman=%.3f dominance=%s gains vs sas/sms = %.2f%%/%.2f%% "
                  "(paper: 5.38%%/15.07%%, up to 16.89%%)%s;",
                  tag, want_rho, dominance ? "yes" : "no", 100 * max_gain_sas,
                  100 * max_gain_sms, ok ? "" : " <-FAIL");
    out.detail += buf;
    out.pass = out.pass && ok;
  };

  auto f2 = xp::fig2_spec();
  f2.seeds = 20;
  f2.workers = 2;
  check_sweep(xp::run_fig2_sweep(f2), /*increasing=*/true, "fig2");

  auto f3 = xp::fig3_spec();
  f3.seeds = 20;
  f3.workers = 2;
  check_sweep(xp::run_fig3_sweep(f3), /*increasing=*/false, "fig3");

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::snprintf(buf, sizeof buf, " (%.0fs, budget 7200s)", secs);
  out.detail += buf;
  out.pass = out.pass && secs <= 7200.0;
  return out;
}

// ---------------------------------------------------------------------- 8
Outcome criterion8() {
  Outcome out;
  dcf::DcfParams params;
  params.num_competitors = 5;
  const auto audit = xp::run_queue_audit(params, 10.0, 2e6, 0.2, 3.0, 6'000'000, 31337);
  out.pass = audit.busy_cycles >= 100'000 && audit.ratio > 1.0 / 3.0 && audit.ratio < 3.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                " predicted %.4g, measured %.4g, ratio %.2f (band [1/3, 3]), busy cycles %llu",
                audit.predicted, audit.measured, audit.ratio,
                static_cast<unsigned long long>(audit.busy_cycles));
  out.detail = buf;
  return out;
}

// ---------------------------------------------------------------------- 9
Outcome criterion9() {
  Outcome out;
  out.pass = true;
  // solve twice
  auto spec = xp::fig2_spec();
  spec.user_count = 3;
  const auto scenario = xp::generate_scenario(spec, 5.0, 99);
  const auto [a1, r1] = opt::solve_bcd(scenario);
  const auto [a2, r2] = opt::solve_bcd(scenario);
  if (opt::allocation_to_json(scenario, a1) != opt::allocation_to_json(scenario, a2))
    out.pass = false;
  if (opt::report_to_json(r1, false) != opt::report_to_json(r2, false)) out.pass = false;

  // simulate twice
  sim::SimConfig cfg;
  cfg.dcf.num_competitors = 4;
  cfg.horizon_slots = 200'000;
  cfg.warmup_slots = 10'000;
  cfg.seed = 4711;
  const auto s1 = sim::simulate_dcf(cfg);
  const auto s2 = sim::simulate_dcf(cfg);
  if (s1.tau_hat != s2.tau_hat || s1.off.mean != s2.off.mean ||
      s1.off.retrans_hist != s2.off.retrans_hist)
    out.pass = false;

  // sweep twice (all three schemes, one point, one seed)
  auto sweep = xp::fig2_spec();
  sweep.grid = {4.0};
  sweep.seeds = 1;
  sweep.workers = 2;
  const auto w1 = xp::run_sweep(sweep);
  const auto w2 = xp::run_sweep(sweep);
  if (w1.csv != w2.csv) out.pass = false;

  out.detail = out.pass ? " solve, simulate, and sweep reruns byte-identical"
                        : " rerun mismatch detected";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto want = [&](int n) { return selected.empty() || selected.count(n) > 0; };

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "analytic-simulation agreement (tau, p_c, mean off-time, P_k histogram)", criterion1},
      {2, "PGF and cycle-transform identities", criterion2},
      {3, "effective-capacity limits and Monte Carlo cross-check", criterion3},
      {4, "concavity of both capacities in delta at fixed a", criterion4},
      {5, "optimizer soundness on 100 random 4-user scenarios", criterion5},
      {6, "small-instance optimality vs exhaustive oracle", criterion6},
      {7, "figure-trend reproduction (monotonicity and dominance)", criterion7},
      {8, "delay-violation approximation audit", criterion8},
      {9, "byte-identical determinism", criterion9},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (!want(e.id)) continue;
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string(" exception: ") + ex.what();
    }
    std::printf("[%s] criterion %d: %s —%s\n", o.pass ? "PASS" : "FAIL", e.id, e.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
