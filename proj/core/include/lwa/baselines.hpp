#pragma once

#include <string>

#include "lwa/scenario.hpp"
#include "lwa/scheduler.hpp"

namespace lwa::baselines {

struct BaselineConfig {
  enum class Scheme { sas, sms };
  Scheme scheme = Scheme::sas;
  double gamma_split = 0.6;  // SMS: fraction of each rate routed to band 1

  void validate() const;
};

struct BaselineResult {
  opt::Allocation alloc;
  double licensed_bandwidth = 0.0;
  bool feasible = false;
  std::string message;
};

// Sequential allocation: users in descending unlicensed SNR, each served
// unlicensed-only with the minimum bandwidth meeting its QoS, until B1 runs
// out; the straddler gets the residual plus a licensed top-up; the rest go
// licensed-only.
BaselineResult run_sas(const Scenario& scenario);

// Static mapping: rate split gamma/1-gamma onto the two bands, per-band
// minimum bandwidths at the per-band QoS budget; unlicensed overshoot is
// rescaled to fit B1 with the shortfall moved to the licensed band.
BaselineResult run_sms(const Scenario& scenario, const BaselineConfig& config);

BaselineResult run_baseline(const Scenario& scenario, const BaselineConfig& config);

}  // namespace lwa::baselines
