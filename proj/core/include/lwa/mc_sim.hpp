#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lwa/dcf.hpp"

namespace lwa::sim {

// Slot-level DCF simulation setup.  All L+1 nodes are saturated.  Draws are
// addressed by (seed, node id, slot epoch) through the Philox stream, so a
// run is reproducible from this struct alone.
struct SimConfig {
  dcf::DcfParams dcf;
  std::uint64_t horizon_slots = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t warmup_slots = 10'000;
  std::vector<double> mgf_grid;  // x values for the empirical MGF, optional
  bool keep_samples = false;     // retain raw off-time samples

  void validate() const;  // horizon > warmup
};

struct OffTimeStats {
  std::uint64_t samples = 0;
  double mean = 0.0;                         // seconds (or the configured unit)
  std::vector<std::uint64_t> retrans_hist;   // per packet, bucket min(#collisions, K-1)
  std::vector<double> mgf_grid;
  std::vector<double> mgf_values;            // (1/n) sum e^{x t_off} per grid x
};

struct DcfSimResult {
  OffTimeStats off;
  // Per-slot transmit probability pooled over all L+1 exchangeable nodes
  // (every node estimates the same stationary tau).
  double tau_hat = 0.0;
  double p_c_hat = 0.0;         // slots with >=1 competitor transmitting / slots
  double collision_rate = 0.0;  // tagged collisions / tagged attempts (diagnostic)
  std::uint64_t slots = 0;
  std::uint64_t total_attempts = 0;   // all nodes
  std::uint64_t tagged_attempts = 0;  // node 0 only
  std::uint64_t tagged_collisions = 0;
  std::vector<double> off_samples;  // filled when keep_samples
};

// Slot-synchronous saturated DCF: counter-zero nodes transmit; one
// transmitter = success (t_s), two or more = collision (t_c), none = idle
// minislot; every other backlogged node decrements once per slot.  The
// tagged node is node 0 (the LWA BS); its success-to-success gaps are the
// off-time samples.
DcfSimResult simulate_dcf(const SimConfig& config);

// Writes off-time samples as little-endian IEEE-754 doubles.
void write_samples(const std::vector<double>& samples, const std::string& path);

struct QueueConfig {
  double arrival_rate = 0.0;  // bits per unit time, constant-rate fluid
  double service_rate = 0.0;  // peak rate while the tagged node transmits
  double delay_bound = 0.0;
  std::uint64_t horizon_slots = 1'000'000;
  std::uint64_t seed = 0;
  std::uint64_t warmup_slots = 10'000;
};

struct QueueResult {
  double violation_prob = 0.0;  // fraction of bits delayed beyond the bound
  std::uint64_t busy_cycles = 0;  // tagged on-periods observed
  double utilization = 0.0;       // arrival rate / long-run service rate
  double total_bits = 0.0;
};

// FIFO fluid queue fed at a constant rate and served at service_rate during
// the tagged node's successful-transmission slots, zero otherwise; the
// on/off pattern comes from the same slot-level DCF process.  Delays are
// measured exactly on the piecewise-linear arrival/departure curves.
// Throws std::invalid_argument if the arrival rate is not below the
// long-run mean service rate (unstable queue).
QueueResult simulate_onoff_queue(const SimConfig& dcf_config, const QueueConfig& queue);

}  // namespace lwa::sim
