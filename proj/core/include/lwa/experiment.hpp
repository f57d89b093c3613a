#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lwa/scenario.hpp"

namespace lwa::xp {

enum class SweepVariable { wifi_node_count, delay_bound, user_count };
enum class Scheme { optimal, sas, sms };

std::string scheme_name(Scheme s);
std::string variable_name(SweepVariable v);

// Channel draw: log-distance path loss over an annulus plus log-normal
// shadowing, clamped in dB; or explicit per-user SNRs.
struct ChannelSpec {
  double pathloss_exponent = 3.7;
  double radius_min = 20.0;   // meters
  double radius_max = 100.0;  // meters
  double ref_snr_db = 10.0;   // median SNR at the median annulus distance
  double shadowing_db = 4.0;  // log-normal sigma
  double snr_min_db = 0.0;
  double snr_max_db = 25.0;
  // When nonempty: per-user [unlicensed, licensed] linear SNRs, used as-is.
  std::vector<std::array<double, 2>> fixed_snr;
};

struct ExperimentSpec {
  std::string name = "sweep";
  int user_count = 8;
  double min_rate = 1e6;
  double delay_bound = 0.2;
  double violation_prob = 0.05;
  double unlicensed_budget = 2e7;
  double frame_length = 1e-3;
  dcf::DcfParams dcf;  // num_competitors overridden by the L sweep
  double big_m = 0.0;

  SweepVariable variable = SweepVariable::wifi_node_count;
  std::vector<double> grid;
  int seeds = 20;
  std::uint64_t base_seed = 1;
  std::vector<Scheme> schemes = {Scheme::optimal, Scheme::sas, Scheme::sms};
  ChannelSpec channel;
  double sms_gamma_split = 0.6;
  std::string out_dir;  // empty: no per-run JSON files
  int workers = 0;      // 0 = hardware concurrency
  bool timing = false;  // real wall times in outputs

  void validate() const;
};

ExperimentSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec load_spec(const std::string& path);

// Deterministic per-seed scenario draw at a given sweep grid value.
Scenario generate_scenario(const ExperimentSpec& spec, double grid_value, std::uint64_t seed);

struct SweepRow {
  double grid_value = 0.0;
  Scheme scheme = Scheme::optimal;
  double mean_bandwidth = 0.0;  // over successful seeds
  double stderr_bandwidth = 0.0;
  double mean_iterations = 0.0;
  int failures = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string csv;     // schema comment + header + one line per row
  int exit_code = 0;   // 0 ok, 2 partial (some infeasible), 1 error
};

// Generic sweep engine; rows ordered by (grid index, scheme index).
SweepResult run_sweep(const ExperimentSpec& spec);

// Presets matching the two reported experiments; run_* validate the sweep
// variable and delegate to run_sweep.
ExperimentSpec fig2_spec();
ExperimentSpec fig3_spec();
SweepResult run_fig2_sweep(const ExperimentSpec& spec);
SweepResult run_fig3_sweep(const ExperimentSpec& spec);

// ---- analytic-vs-simulated validation ----

struct ValidationPoint {
  int wifi_nodes = 0;
  double tau_model = 0.0, tau_hat = 0.0;
  double pc_model = 0.0, pc_hat = 0.0;
  double mean_off_model = 0.0, mean_off_hat = 0.0;
  std::vector<double> hist_z;  // per-bin z-scores of the retransmission histogram
  bool tau_ok = false, pc_ok = false, mean_ok = false, hist_ok = false;
};

struct ValidationReport {
  std::vector<ValidationPoint> points;
  bool all_ok = false;
};

ValidationReport run_model_validation(const dcf::DcfParams& base, const std::vector<int>& l_values,
                                      std::uint64_t slots, std::uint64_t seed);

struct QueueAudit {
  double qos_exponent = 0.0;   // theta solving theta*EC*D = target
  double capacity = 0.0;       // EC at that theta
  double arrival_rate = 0.0;   // = capacity
  double predicted = 0.0;      // exp(-target)
  double measured = 0.0;
  double ratio = 1.0;          // measured / predicted
  std::uint64_t busy_cycles = 0;
};

// Drives the on-off queue at the EC operating point with
// theta * EC * delay_bound = target_exponent and measures the empirical
// delay-violation probability.
QueueAudit run_queue_audit(const dcf::DcfParams& dcf, double avg_snr, double bandwidth,
                           double delay_bound, double target_exponent, std::uint64_t slots,
                           std::uint64_t seed);

std::string validation_to_json(const ValidationReport& report);

}  // namespace lwa::xp
