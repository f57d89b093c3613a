// lwa: effective-capacity analysis and licensed-bandwidth scheduling for
// LTE/WiFi aggregation.  Subcommands: ec, solve, simulate, sweep-fig2,
// sweep-fig3, validate.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lwa/baselines.hpp"
#include "lwa/dcf.hpp"
#include "lwa/effective_capacity.hpp"
#include "lwa/experiment.hpp"
#include "lwa/mc_sim.hpp"
#include "lwa/scenario.hpp"
#include "lwa/scheduler.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  std::string scheme = "optimal";
  double tol = 1e-6;
  bool quiet = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme = false) {
  cmd->add_option("--config", o.config, "JSON config path");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "random seed");
  if (with_scheme) cmd->add_option("--scheme", o.scheme, "optimal | sas | sms");
  cmd->add_option("--tol", o.tol, "solver tolerance");
  cmd->add_flag("--quiet", o.quiet, "suppress progress logging");
  cmd->add_flag("--timing", o.timing, "real wall times in file outputs");
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

int cmd_ec(const CommonOpts& o, int band, double beta, double theta, double snr, double frame,
           int wifi_nodes) {
  lwa::dcf::DcfParams params;
  if (!o.config.empty()) params = lwa::load_scenario(o.config).dcf;
  params.num_competitors = wifi_nodes;

  json out;
  if (band == 1) {
    const auto point = lwa::dcf::solve_fixed_point(params);
    const lwa::dcf::OffTimeModel off(params, point);
    const double cap = lwa::ec::unlicensed_capacity(beta, theta, snr, off);
    out = json{{"band", 1},
               {"beta", beta},
               {"theta", theta},
               {"snr", snr},
               {"wifi_nodes", wifi_nodes},
               {"tau", point.transmit_prob},
               {"p_c", point.collision_prob},
               {"mean_off_time", off.mean()},
               {"effective_capacity", cap}};
  } else {
    const double cap = lwa::ec::licensed_capacity(beta, theta, snr, frame);
    double diag = 0.0;
    bool diag_ok = true;
    try {
      diag = lwa::ec::licensed_capacity_closed_form(beta, theta, snr, frame);
    } catch (const std::exception&) {
      diag_ok = false;
    }
    out = json{{"band", 2},
               {"beta", beta},
               {"theta", theta},
               {"snr", snr},
               {"frame_length", frame},
               {"effective_capacity", cap},
               {"closed_form_diagnostic", diag_ok ? json(diag) : json()}};
  }
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_solve(const CommonOpts& o) {
  if (o.config.empty()) throw CLI::ValidationError("--config is required for solve");
  const auto scenario = lwa::load_scenario(o.config);

  std::string alloc_json, report_json, csv_row;
  int exit_code = 0;
  if (o.scheme == "optimal") {
    lwa::opt::SolveOptions opts;
    opts.outer_tol = o.tol;
    opts.quiet = o.quiet;
    const auto [alloc, report] = lwa::opt::solve_bcd(scenario, opts);
    alloc_json = lwa::opt::allocation_to_json(scenario, alloc);
    report_json = lwa::opt::report_to_json(report, o.timing);
    csv_row = lwa::opt::summary_csv_row(scenario.id, "optimal", report.objective,
                                        report.outer_iterations, report.status,
                                        report.wall_time, o.timing);
    if (report.status != lwa::opt::SolveStatus::converged) exit_code = 2;
    if (!o.quiet)
      std::cerr << "status " << csv_row << " (wall " << report.wall_time << " s)\n";
  } else if (o.scheme == "sas" || o.scheme == "sms") {
    lwa::baselines::BaselineConfig cfg;
    cfg.scheme = o.scheme == "sas" ? lwa::baselines::BaselineConfig::Scheme::sas
                                   : lwa::baselines::BaselineConfig::Scheme::sms;
    const auto res = lwa::baselines::run_baseline(scenario, cfg);
    alloc_json = lwa::opt::allocation_to_json(scenario, res.alloc);
    report_json = json{{"scheme", o.scheme},
                       {"licensed_bandwidth", res.licensed_bandwidth},
                       {"feasible", res.feasible},
                       {"message", res.message}}
                      .dump(2) +
                  "\n";
    csv_row = lwa::opt::summary_csv_row(
        scenario.id, o.scheme, res.licensed_bandwidth, 1,
        res.feasible ? lwa::opt::SolveStatus::converged : lwa::opt::SolveStatus::infeasible, 0.0,
        o.timing);
    if (!res.feasible) exit_code = 2;
  } else {
    throw CLI::ValidationError("unknown scheme: " + o.scheme);
  }

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    write_file(dir / (scenario.id + "_" + o.scheme + "_allocation.json"), alloc_json);
    write_file(dir / (scenario.id + "_" + o.scheme + "_report.json"), report_json);
    write_file(dir / (scenario.id + "_" + o.scheme + "_summary.csv"),
               "# schema=lwa-solve-v1\nscenario,scheme,objective,iterations,status,wall_time\n" +
                   csv_row + "\n");
  }
  std::cout << csv_row << std::endl;
  return exit_code;
}

int cmd_simulate(const CommonOpts& o, int wifi_nodes, std::uint64_t slots,
                 const std::string& samples_out) {
  lwa::sim::SimConfig cfg;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot open " + o.config);
    json j = json::parse(in);
    if (j.contains("dcf")) {
      const auto& d = j.at("dcf");
      cfg.dcf.w0 = d.value("w0", cfg.dcf.w0);
      cfg.dcf.max_attempts = d.value("max_attempts", cfg.dcf.max_attempts);
      cfg.dcf.idle_slot = d.value("idle_slot", cfg.dcf.idle_slot);
      cfg.dcf.success_slot = d.value("success_slot", cfg.dcf.success_slot);
      cfg.dcf.collision_slot = d.value("collision_slot", cfg.dcf.collision_slot);
      cfg.dcf.num_competitors = d.value("num_competitors", cfg.dcf.num_competitors);
    }
    cfg.horizon_slots = j.value("horizon_slots", cfg.horizon_slots);
    cfg.warmup_slots = j.value("warmup_slots", cfg.warmup_slots);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("mgf_grid")) cfg.mgf_grid = j.at("mgf_grid").get<std::vector<double>>();
    cfg.keep_samples = j.value("keep_samples", cfg.keep_samples);
  }
  if (wifi_nodes >= 0) cfg.dcf.num_competitors = wifi_nodes;
  if (slots > 0) cfg.horizon_slots = slots;
  cfg.seed = o.seed;
  if (!samples_out.empty()) cfg.keep_samples = true;

  const auto res = lwa::sim::simulate_dcf(cfg);
  const auto point = lwa::dcf::solve_fixed_point(cfg.dcf);
  const lwa::dcf::OffTimeModel off(cfg.dcf, point);

  json out{{"slots", res.slots},
           {"tau_hat", res.tau_hat},
           {"tau_model", point.transmit_prob},
           {"p_c_hat", res.p_c_hat},
           {"p_c_model", point.collision_prob},
           {"collision_rate_conditional", res.collision_rate},
           {"off_samples", res.off.samples},
           {"mean_off_hat", res.off.mean},
           {"mean_off_model", off.mean()},
           {"retrans_hist", res.off.retrans_hist}};
  if (!cfg.mgf_grid.empty()) {
    out["mgf_grid"] = res.off.mgf_grid;
    out["mgf_hat"] = res.off.mgf_values;
    json model = json::array();
    for (double x : cfg.mgf_grid) model.push_back(off.pgf(std::exp(x)));
    out["mgf_model"] = model;
  }
  if (!samples_out.empty()) {
    lwa::sim::write_samples(res.off_samples, samples_out);
    out["samples_file"] = samples_out;
  }
  const std::string text = out.dump(2) + "\n";
  if (!o.out.empty()) write_file(fs::path(o.out) / "simulate.json", text);
  std::cout << text;
  return 0;
}

int cmd_sweep(const CommonOpts& o, bool fig2, int seeds_override) {
  lwa::xp::ExperimentSpec spec = fig2 ? lwa::xp::fig2_spec() : lwa::xp::fig3_spec();
  if (!o.config.empty()) spec = lwa::xp::load_spec(o.config);
  if (seeds_override > 0) spec.seeds = seeds_override;
  spec.base_seed = o.seed;
  spec.timing = o.timing;
  if (!o.out.empty()) spec.out_dir = o.out;

  const auto res = fig2 ? lwa::xp::run_fig2_sweep(spec) : lwa::xp::run_fig3_sweep(spec);
  if (!o.out.empty())
    write_file(fs::path(o.out) / (spec.name + ".csv"), res.csv);
  std::cout << res.csv;
  return res.exit_code;
}

int cmd_validate(const CommonOpts& o, std::uint64_t slots) {
  lwa::dcf::DcfParams params;
  if (!o.config.empty()) params = lwa::load_scenario(o.config).dcf;

  const auto report = lwa::xp::run_model_validation(params, {2, 5, 10}, slots, o.seed);
  json out = json::parse(lwa::xp::validation_to_json(report));

  // The delay-approximation audit needs genuine contention on the band.
  auto audit_params = params;
  if (audit_params.num_competitors < 1) audit_params.num_competitors = 5;
  const auto audit =
      lwa::xp::run_queue_audit(audit_params, 10.0, 2e6, 0.2, 3.0,
                               std::max<std::uint64_t>(slots, 2000000), o.seed);
  out["queue_audit"] = json{{"theta", audit.qos_exponent},
                            {"effective_capacity", audit.capacity},
                            {"predicted_violation", audit.predicted},
                            {"measured_violation", audit.measured},
                            {"ratio", audit.ratio},
                            {"busy_cycles", audit.busy_cycles},
                            {"within_factor_3", audit.ratio > 1.0 / 3.0 && audit.ratio < 3.0}};
  const std::string text = out.dump(2) + "\n";
  if (!o.out.empty()) write_file(fs::path(o.out) / "validate.json", text);
  std::cout << text;
  const bool queue_ok = audit.ratio > 1.0 / 3.0 && audit.ratio < 3.0;
  return report.all_ok && queue_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effective-capacity scheduling across LTE/WiFi air interfaces"};
  app.require_subcommand(1);

  CommonOpts ec_o, solve_o, sim_o, f2_o, f3_o, val_o;

  auto* ec_cmd = app.add_subcommand("ec", "evaluate per-band effective capacities");
  int band = 1, wifi_nodes = 4;
  double beta = 1e6, theta = 1e-5, snr = 10.0, frame = 1e-3;
  ec_cmd->add_option("--band", band, "1 = unlicensed, 2 = licensed")->check(CLI::Range(1, 2));
  ec_cmd->add_option("--beta", beta, "bandwidth (Hz)");
  ec_cmd->add_option("--theta", theta, "QoS exponent (1/bits)");
  ec_cmd->add_option("--snr", snr, "average SNR (linear)");
  ec_cmd->add_option("--frame", frame, "LTE frame length (s)");
  ec_cmd->add_option("--wifi-nodes", wifi_nodes, "competing WiFi nodes (band 1)");
  add_common(ec_cmd, ec_o);

  auto* solve_cmd = app.add_subcommand("solve", "solve one scenario with one scheme");
  add_common(solve_cmd, solve_o, /*with_scheme=*/true);

  auto* sim_cmd = app.add_subcommand("simulate", "slot-level DCF validation run");
  int sim_nodes = -1;
  std::uint64_t sim_slots = 0;
  std::string samples_out;
  sim_cmd->add_option("--wifi-nodes", sim_nodes, "competing WiFi nodes");
  sim_cmd->add_option("--slots", sim_slots, "horizon in slots");
  sim_cmd->add_option("--samples-out", samples_out, "raw off-time samples (binary doubles)");
  add_common(sim_cmd, sim_o);

  auto* f2_cmd = app.add_subcommand("sweep-fig2", "licensed bandwidth vs WiFi node count");
  auto* f3_cmd = app.add_subcommand("sweep-fig3", "licensed bandwidth vs delay bound");
  int f2_seeds = 0, f3_seeds = 0;
  f2_cmd->add_option("--seeds", f2_seeds, "seeds per grid point");
  f3_cmd->add_option("--seeds", f3_seeds, "seeds per grid point");
  add_common(f2_cmd, f2_o);
  add_common(f3_cmd, f3_o);

  auto* val_cmd = app.add_subcommand("validate", "analytic-vs-simulated check suite");
  std::uint64_t val_slots = 1000000;
  val_cmd->add_option("--slots", val_slots, "slots per validation point");
  add_common(val_cmd, val_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ec_cmd->parsed()) return cmd_ec(ec_o, band, beta, theta, snr, frame, wifi_nodes);
    if (solve_cmd->parsed()) return cmd_solve(solve_o);
    if (sim_cmd->parsed()) return cmd_simulate(sim_o, sim_nodes, sim_slots, samples_out);
    if (f2_cmd->parsed()) return cmd_sweep(f2_o, true, f2_seeds);
    if (f3_cmd->parsed()) return cmd_sweep(f3_o, false, f3_seeds);
    if (val_cmd->parsed()) return cmd_validate(val_o, val_slots);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
