#include "lwa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "lwa/baselines.hpp"
#include "lwa/effective_capacity.hpp"
#include "lwa/mc_sim.hpp"
#include "lwa/numerics.hpp"
#include "lwa/rng.hpp"
#include "lwa/scheduler.hpp"

namespace lwa::xp {

using json = nlohmann::ordered_json;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::optimal: return "optimal";
    case Scheme::sas: return "sas";
    case Scheme::sms: return "sms";
  }
  return "unknown";
}

std::string variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::wifi_node_count: return "wifi_node_count";
    case SweepVariable::delay_bound: return "delay_bound";
    case SweepVariable::user_count: return "user_count";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("ExperimentSpec: sweep grid is empty");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("ExperimentSpec: sweep grid must be sorted");
  if (seeds < 1) throw std::invalid_argument("ExperimentSpec: seeds must be >= 1");
  if (user_count < 1) throw std::invalid_argument("ExperimentSpec: user_count must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("ExperimentSpec: no schemes selected");
  dcf.validate();
  if (!channel.fixed_snr.empty() &&
      static_cast<int>(channel.fixed_snr.size()) < user_count)
    throw std::invalid_argument("ExperimentSpec: fixed_snr shorter than user_count");
}

namespace {

Scheme scheme_from_name(const std::string& s) {
  if (s == "optimal") return Scheme::optimal;
  if (s == "sas") return Scheme::sas;
  if (s == "sms") return Scheme::sms;
  throw std::invalid_argument("unknown scheme: " + s);
}

SweepVariable variable_from_name(const std::string& s) {
  if (s == "wifi_node_count") return SweepVariable::wifi_node_count;
  if (s == "delay_bound") return SweepVariable::delay_bound;
  if (s == "user_count") return SweepVariable::user_count;
  throw std::invalid_argument("unknown sweep variable: " + s);
}

}  // namespace

std::string spec_to_json(const ExperimentSpec& s) {
  json schemes = json::array();
  for (auto sc : s.schemes) schemes.push_back(scheme_name(sc));
  json fixed = json::array();
  for (const auto& f : s.channel.fixed_snr) fixed.push_back(json::array({f[0], f[1]}));
  json j{{"name", s.name},
         {"user_count", s.user_count},
         {"min_rate", s.min_rate},
         {"delay_bound", s.delay_bound},
         {"violation_prob", s.violation_prob},
         {"unlicensed_budget", s.unlicensed_budget},
         {"frame_length", s.frame_length},
         {"dcf",
          json{{"w0", s.dcf.w0},
               {"max_attempts", s.dcf.max_attempts},
               {"idle_slot", s.dcf.idle_slot},
               {"success_slot", s.dcf.success_slot},
               {"collision_slot", s.dcf.collision_slot},
               {"num_competitors", s.dcf.num_competitors}}},
         {"big_m", s.big_m},
         {"variable", variable_name(s.variable)},
         {"grid", s.grid},
         {"seeds", s.seeds},
         {"base_seed", s.base_seed},
         {"schemes", schemes},
         {"channel",
          json{{"pathloss_exponent", s.channel.pathloss_exponent},
               {"radius_min", s.channel.radius_min},
               {"radius_max", s.channel.radius_max},
               {"ref_snr_db", s.channel.ref_snr_db},
               {"shadowing_db", s.channel.shadowing_db},
               {"snr_min_db", s.channel.snr_min_db},
               {"snr_max_db", s.channel.snr_max_db},
               {"fixed_snr", fixed}}},
         {"sms_gamma_split", s.sms_gamma_split},
         {"out_dir", s.out_dir},
         {"workers", s.workers},
         {"timing", s.timing}};
  return j.dump(2) + "\n";
}

ExperimentSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("experiment JSON parse error: ") + e.what());
  }
  ExperimentSpec s;
  s.name = j.value("name", s.name);
  s.user_count = j.value("user_count", s.user_count);
  s.min_rate = j.value("min_rate", s.min_rate);
  s.delay_bound = j.value("delay_bound", s.delay_bound);
  s.violation_prob = j.value("violation_prob", s.violation_prob);
  s.unlicensed_budget = j.value("unlicensed_budget", s.unlicensed_budget);
  s.frame_length = j.value("frame_length", s.frame_length);
  s.big_m = j.value("big_m", s.big_m);
  if (j.contains("dcf")) {
    const auto& d = j.at("dcf");
    s.dcf.w0 = d.value("w0", s.dcf.w0);
    s.dcf.max_attempts = d.value("max_attempts", s.dcf.max_attempts);
    s.dcf.idle_slot = d.value("idle_slot", s.dcf.idle_slot);
    s.dcf.success_slot = d.value("success_slot", s.dcf.success_slot);
    s.dcf.collision_slot = d.value("collision_slot", s.dcf.collision_slot);
    s.dcf.num_competitors = d.value("num_competitors", s.dcf.num_competitors);
  }
  if (j.contains("variable")) s.variable = variable_from_name(j.at("variable"));
  if (j.contains("grid")) s.grid = j.at("grid").get<std::vector<double>>();
  s.seeds = j.value("seeds", s.seeds);
  s.base_seed = j.value("base_seed", s.base_seed);
  if (j.contains("schemes")) {
    s.schemes.clear();
    for (const auto& sc : j.at("schemes")) s.schemes.push_back(scheme_from_name(sc));
  }
  if (j.contains("channel")) {
    const auto& c = j.at("channel");
    s.channel.pathloss_exponent = c.value("pathloss_exponent", s.channel.pathloss_exponent);
    s.channel.radius_min = c.value("radius_min", s.channel.radius_min);
    s.channel.radius_max = c.value("radius_max", s.channel.radius_max);
    s.channel.ref_snr_db = c.value("ref_snr_db", s.channel.ref_snr_db);
    s.channel.shadowing_db = c.value("shadowing_db", s.channel.shadowing_db);
    s.channel.snr_min_db = c.value("snr_min_db", s.channel.snr_min_db);
    s.channel.snr_max_db = c.value("snr_max_db", s.channel.snr_max_db);
    if (c.contains("fixed_snr"))
      for (const auto& f : c.at("fixed_snr"))
        s.channel.fixed_snr.push_back({f.at(0).get<double>(), f.at(1).get<double>()});
  }
  s.sms_gamma_split = j.value("sms_gamma_split", s.sms_gamma_split);
  s.out_dir = j.value("out_dir", s.out_dir);
  s.workers = j.value("workers", s.workers);
  s.timing = j.value("timing", s.timing);
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_spec: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return spec_from_json(ss.str());
}

Scenario generate_scenario(const ExperimentSpec& spec, double grid_value, std::uint64_t seed) {
  int users = spec.user_count;
  double delay = spec.delay_bound;
  int competitors = spec.dcf.num_competitors;
  switch (spec.variable) {
    case SweepVariable::wifi_node_count:
      competitors = static_cast<int>(std::lround(grid_value));
      break;
    case SweepVariable::delay_bound:
      delay = grid_value;
      break;
    case SweepVariable::user_count:
      users = static_cast<int>(std::lround(grid_value));
      break;
  }

  Scenario s;
  {
    std::ostringstream id;
    id << spec.name << '_' << variable_name(spec.variable) << '_' << grid_value << "_seed"
       << seed;
    s.id = id.str();
  }
  s.unlicensed_budget = spec.unlicensed_budget;
  s.frame_length = spec.frame_length;
  s.dcf = spec.dcf;
  s.dcf.num_competitors = competitors;
  s.big_m = spec.big_m;

  const auto& ch = spec.channel;
  const double d_ref =
      std::sqrt(0.5 * (ch.radius_min * ch.radius_min + ch.radius_max * ch.radius_max));
  for (int n = 0; n < users; ++n) {
    ScenarioUser u;
    u.qos.min_rate = spec.min_rate;
    u.qos.delay_bound = delay;
    u.qos.violation_prob = spec.violation_prob;
    if (!ch.fixed_snr.empty()) {
      u.snr_unlicensed = ch.fixed_snr[n][0];
      u.snr_licensed = ch.fixed_snr[n][1];
    } else {
      rng::Stream stream(seed, 1000 + static_cast<std::uint64_t>(n));
      // Uniform over the annulus area.
      const double t = stream.next_double();
      const double r = std::sqrt(ch.radius_min * ch.radius_min +
                                 t * (ch.radius_max * ch.radius_max -
                                      ch.radius_min * ch.radius_min));
      const double base_db =
          ch.ref_snr_db - 10.0 * ch.pathloss_exponent * std::log10(r / d_ref);
      for (int m = 0; m < 2; ++m) {
        double snr_db = base_db + ch.shadowing_db * stream.next_normal();
        snr_db = std::min(ch.snr_max_db, std::max(ch.snr_min_db, snr_db));
        (m == 0 ? u.snr_unlicensed : u.snr_licensed) = std::pow(10.0, snr_db / 10.0);
      }
    }
    s.users.push_back(u);
  }
  return s;
}

namespace {

struct RunOutcome {
  double bandwidth = 0.0;
  double iterations = 0.0;
  bool ok = false;
  std::string report_json;  // empty when not persisted
  std::string scenario_id;
};

RunOutcome run_one(const ExperimentSpec& spec, Scheme scheme, const Scenario& scenario) {
  RunOutcome out;
  out.scenario_id = scenario.id;
  try {
    if (scheme == Scheme::optimal) {
      const auto [alloc, report] = opt::solve_bcd(scenario);
      out.ok = report.status == opt::SolveStatus::converged;
      out.bandwidth = report.objective;
      out.iterations = report.outer_iterations;
      if (!spec.out_dir.empty()) out.report_json = opt::report_to_json(report, spec.timing);
    } else {
      baselines::BaselineConfig cfg;
      cfg.scheme = scheme == Scheme::sas ? baselines::BaselineConfig::Scheme::sas
                                         : baselines::BaselineConfig::Scheme::sms;
      cfg.gamma_split = spec.sms_gamma_split;
      const auto res = baselines::run_baseline(scenario, cfg);
      out.ok = res.feasible;
      out.bandwidth = res.licensed_bandwidth;
      out.iterations = 1.0;
      if (!spec.out_dir.empty()) {
        json j{{"scheme", scheme_name(scheme)},
               {"licensed_bandwidth", res.licensed_bandwidth},
               {"feasible", res.feasible},
               {"message", res.message}};
        out.report_json = j.dump(2) + "\n";
      }
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.report_json = std::string("{\"error\": \"") + e.what() + "\"}\n";
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  SweepResult result;

  struct Task {
    int grid_index;
    int scheme_index;
    int seed_index;
    Scenario scenario;
  };
  std::vector<Task> tasks;
  for (int gi = 0; gi < static_cast<int>(spec.grid.size()); ++gi)
    for (int si = 0; si < static_cast<int>(spec.schemes.size()); ++si)
      for (int k = 0; k < spec.seeds; ++k) {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(k);
        tasks.push_back({gi, si, k, generate_scenario(spec, spec.grid[gi], seed)});
      }

  std::vector<RunOutcome> outcomes(tasks.size());
  const int workers = spec.workers > 0
                          ? spec.workers
                          : std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      outcomes[i] = run_one(spec, spec.schemes[tasks[i].scheme_index], tasks[i].scenario);
    }
  };
  {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (outcomes[i].report_json.empty()) continue;
      const auto path = std::filesystem::path(spec.out_dir) /
                        (outcomes[i].scenario_id + "_" +
                         scheme_name(spec.schemes[tasks[i].scheme_index]) + ".json");
      std::ofstream f(path);
      f << outcomes[i].report_json;
    }
  }

  // Aggregate in (grid, scheme) order.
  std::ostringstream csv;
  csv << "# schema=lwa-sweep-v1 variable=" << variable_name(spec.variable) << "\n";
  csv << variable_name(spec.variable)
      << ",scheme,mean_licensed_bandwidth,stderr,mean_iterations,failures\n";
  csv.precision(10);
  bool any_failure = false;
  for (int gi = 0; gi < static_cast<int>(spec.grid.size()); ++gi) {
    for (int si = 0; si < static_cast<int>(spec.schemes.size()); ++si) {
      SweepRow row;
      row.grid_value = spec.grid[gi];
      row.scheme = spec.schemes[si];
      double sum = 0.0, sum2 = 0.0, iters = 0.0;
      int ok_count = 0;
      for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].grid_index != gi || tasks[i].scheme_index != si) continue;
        if (outcomes[i].ok) {
          sum += outcomes[i].bandwidth;
          sum2 += outcomes[i].bandwidth * outcomes[i].bandwidth;
          iters += outcomes[i].iterations;
          ++ok_count;
        } else {
          ++row.failures;
        }
      }
      if (ok_count > 0) {
        row.mean_bandwidth = sum / ok_count;
        row.mean_iterations = iters / ok_count;
        if (ok_count > 1) {
          const double var =
              std::max(0.0, (sum2 - sum * sum / ok_count) / (ok_count - 1));
          row.stderr_bandwidth = std::sqrt(var / ok_count);
        }
      }
      if (row.failures > 0) any_failure = true;
      result.rows.push_back(row);
      csv << row.grid_value << ',' << scheme_name(row.scheme) << ',' << row.mean_bandwidth
          << ',' << row.stderr_bandwidth << ',' << row.mean_iterations << ',' << row.failures
          << "\n";
    }
  }
  result.csv = csv.str();
  result.exit_code = any_failure ? 2 : 0;
  return result;
}

ExperimentSpec fig2_spec() {
  ExperimentSpec s;
  s.name = "fig2";
  s.variable = SweepVariable::wifi_node_count;
  s.grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  s.user_count = 8;
  s.min_rate = 1e6;
  s.delay_bound = 0.2;
  s.unlicensed_budget = 6e6;  // keeps the licensed requirement active on the whole grid
  return s;
}

ExperimentSpec fig3_spec() {
  ExperimentSpec s;
  s.name = "fig3";
  s.variable = SweepVariable::delay_bound;
  s.grid = {0.05, 0.075, 0.1, 0.125, 0.15, 0.2, 0.25, 0.3};
  s.user_count = 8;
  s.min_rate = 1e6;
  s.dcf.num_competitors = 4;
  s.unlicensed_budget = 6e6;
  return s;
}

SweepResult run_fig2_sweep(const ExperimentSpec& spec) {
  if (spec.variable != SweepVariable::wifi_node_count)
    throw std::invalid_argument("run_fig2_sweep: sweep variable must be wifi_node_count");
  return run_sweep(spec);
}

SweepResult run_fig3_sweep(const ExperimentSpec& spec) {
  if (spec.variable != SweepVariable::delay_bound)
    throw std::invalid_argument("run_fig3_sweep: sweep variable must be delay_bound");
  return run_sweep(spec);
}

// ---------------------------------------------------------------------------
// Model validation and the delay-approximation audit
// ---------------------------------------------------------------------------
ValidationReport run_model_validation(const dcf::DcfParams& base, const std::vector<int>& l_values,
                                      std::uint64_t slots, std::uint64_t seed) {
  ValidationReport report;
  report.all_ok = true;
  for (int l : l_values) {
    ValidationPoint pt;
    pt.wifi_nodes = l;
    dcf::DcfParams params = base;
    params.num_competitors = l;

    const auto point = dcf::solve_fixed_point(params);
    const dcf::OffTimeModel off(params, point);
    pt.tau_model = point.transmit_prob;
    pt.pc_model = point.collision_prob;
    pt.mean_off_model = off.mean();

    sim::SimConfig cfg;
    cfg.dcf = params;
    cfg.horizon_slots = slots;
    cfg.warmup_slots = std::min<std::uint64_t>(slots / 10, 10000);
    cfg.seed = seed;
    const auto res = sim::simulate_dcf(cfg);
    pt.tau_hat = res.tau_hat;
    pt.pc_hat = res.p_c_hat;
    pt.mean_off_hat = res.off.mean;

    pt.tau_ok = std::abs(pt.tau_hat - pt.tau_model) <= 0.02 * pt.tau_model;
    pt.pc_ok = l == 0 ? pt.pc_hat == 0.0
                      : std::abs(pt.pc_hat - pt.pc_model) <= 0.02 * pt.pc_model;
    pt.mean_ok = std::abs(pt.mean_off_hat - pt.mean_off_model) <= 0.03 * pt.mean_off_model;

    const auto pk = dcf::retransmission_pmf(point, params);
    std::uint64_t packets = 0;
    for (auto c : res.off.retrans_hist) packets += c;
    pt.hist_ok = packets > 0;
    for (std::size_t k = 0; k < pk.size(); ++k) {
      const double expd = static_cast<double>(packets) * pk[k];
      const double sd = std::sqrt(std::max(1e-12, static_cast<double>(packets) * pk[k] *
                                                       (1.0 - pk[k])));
      const double z = (static_cast<double>(res.off.retrans_hist[k]) - expd) / sd;
      pt.hist_z.push_back(z);
      if (std::abs(z) > 3.0) pt.hist_ok = false;
    }
    report.all_ok =
        report.all_ok && pt.tau_ok && pt.pc_ok && pt.mean_ok && pt.hist_ok;
    report.points.push_back(std::move(pt));
  }
  return report;
}

QueueAudit run_queue_audit(const dcf::DcfParams& dcf_params, double avg_snr, double bandwidth,
                           double delay_bound, double target_exponent, std::uint64_t slots,
                           std::uint64_t seed) {
  const auto point = dcf::solve_fixed_point(dcf_params);
  const dcf::OffTimeModel off(dcf_params, point);

  // theta * EC(theta) * D is increasing in theta; bracket and bisect.
  auto product = [&](double theta) {
    return theta * ec::unlicensed_capacity(bandwidth, theta, avg_snr, off) * delay_bound;
  };
  double hi = 1e-9;
  int grow = 0;
  while (product(hi) < target_exponent) {
    hi *= 2.0;
    if (++grow > 200) throw std::runtime_error("run_queue_audit: no theta bracket");
  }
  const double theta =
      num::bisect([&](double th) { return product(th) - target_exponent; }, 0.0, hi, 80);

  QueueAudit audit;
  audit.qos_exponent = theta;
  audit.capacity = ec::unlicensed_capacity(bandwidth, theta, avg_snr, off);
  audit.arrival_rate = audit.capacity;
  audit.predicted = std::exp(-target_exponent);

  sim::SimConfig cfg;
  cfg.dcf = dcf_params;
  cfg.horizon_slots = slots;
  cfg.warmup_slots = std::min<std::uint64_t>(slots / 10, 20000);
  cfg.seed = seed;
  sim::QueueConfig q;
  q.arrival_rate = audit.arrival_rate;
  q.service_rate = bandwidth * std::log2(1.0 + avg_snr);
  q.delay_bound = delay_bound;
  q.horizon_slots = slots;
  q.warmup_slots = cfg.warmup_slots;
  q.seed = seed;
  const auto res = sim::simulate_onoff_queue(cfg, q);
  audit.measured = res.violation_prob;
  audit.busy_cycles = res.busy_cycles;
  audit.ratio = audit.predicted > 0.0 ? audit.measured / audit.predicted : 0.0;
  return audit;
}

std::string validation_to_json(const ValidationReport& report) {
  json pts = json::array();
  for (const auto& p : report.points)
    pts.push_back(json{{"wifi_nodes", p.wifi_nodes},
                       {"tau_model", p.tau_model},
                       {"tau_hat", p.tau_hat},
                       {"pc_model", p.pc_model},
                       {"pc_hat", p.pc_hat},
                       {"mean_off_model", p.mean_off_model},
                       {"mean_off_hat", p.mean_off_hat},
                       {"hist_z", p.hist_z},
                       {"tau_ok", p.tau_ok},
                       {"pc_ok", p.pc_ok},
                       {"mean_ok", p.mean_ok},
                       {"hist_ok", p.hist_ok}});
  json j{{"points", pts}, {"all_ok", report.all_ok}};
  return j.dump(2) + "\n";
}

}  // namespace lwa::xp
