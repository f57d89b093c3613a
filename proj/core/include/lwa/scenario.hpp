#pragma once

#include <string>
#include <vector>

#include "lwa/dcf.hpp"
#include "lwa/effective_capacity.hpp"

namespace lwa {

struct ScenarioUser {
  ec::UserQos qos;
  double snr_unlicensed = 10.0;  // linear average SNR in band 1
  double snr_licensed = 10.0;    // linear average SNR in band 2
};

// One scheduling problem instance.
struct Scenario {
  std::string id = "scenario";
  std::vector<ScenarioUser> users;
  double unlicensed_budget = 2e7;  // B1, Hz
  double frame_length = 1e-3;      // LTE frame, seconds
  dcf::DcfParams dcf;
  double big_m = 0.0;  // bandwidth cap per selected band; 0 = derive from the feasible start

  void validate() const;
};

// JSON round trip (schema in docs/schemas/scenario.schema.json).  Output has
// stable key order.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace lwa
