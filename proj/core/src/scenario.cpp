#include "lwa/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lwa {

void Scenario::validate() const {
  if (users.empty()) throw std::invalid_argument("Scenario: user list is empty");
  if (!(unlicensed_budget >= 0.0)) throw std::invalid_argument("Scenario: B1 must be >= 0");
  if (!(frame_length > 0.0)) throw std::invalid_argument("Scenario: frame_length must be > 0");
  if (big_m < 0.0) throw std::invalid_argument("Scenario: big_m must be >= 0");
  dcf.validate();
  for (const auto& u : users) {
    u.qos.validate();
    if (!(u.snr_unlicensed > 0.0) || !(u.snr_licensed > 0.0))
      throw std::invalid_argument("Scenario: SNRs must be > 0 (linear)");
  }
}

namespace {
using json = nlohmann::ordered_json;

json dcf_to_json(const dcf::DcfParams& p) {
  return json{{"w0", p.w0},
              {"max_attempts", p.max_attempts},
              {"idle_slot", p.idle_slot},
              {"success_slot", p.success_slot},
              {"collision_slot", p.collision_slot},
              {"num_competitors", p.num_competitors}};
}

dcf::DcfParams dcf_from_json(const json& j) {
  dcf::DcfParams p;
  p.w0 = j.at("w0").get<int>();
  p.max_attempts = j.at("max_attempts").get<int>();
  p.idle_slot = j.at("idle_slot").get<double>();
  p.success_slot = j.at("success_slot").get<double>();
  p.collision_slot = j.at("collision_slot").get<double>();
  p.num_competitors = j.at("num_competitors").get<int>();
  return p;
}
}  // namespace

std::string scenario_to_json(const Scenario& s) {
  json users = json::array();
  for (const auto& u : s.users)
    users.push_back(json{{"min_rate", u.qos.min_rate},
                         {"delay_bound", u.qos.delay_bound},
                         {"violation_prob", u.qos.violation_prob},
                         {"snr_unlicensed", u.snr_unlicensed},
                         {"snr_licensed", u.snr_licensed}});
  json j{{"id", s.id},
         {"users", users},
         {"unlicensed_budget", s.unlicensed_budget},
         {"frame_length", s.frame_length},
         {"dcf", dcf_to_json(s.dcf)},
         {"big_m", s.big_m}};
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("scenario JSON parse error: ") + e.what());
  }
  Scenario s;
  s.id = j.value("id", std::string("scenario"));
  s.unlicensed_budget = j.at("unlicensed_budget").get<double>();
  s.frame_length = j.value("frame_length", 1e-3);
  s.big_m = j.value("big_m", 0.0);
  if (j.contains("dcf")) s.dcf = dcf_from_json(j.at("dcf"));
  for (const auto& ju : j.at("users")) {
    ScenarioUser u;
    u.qos.min_rate = ju.at("min_rate").get<double>();
    u.qos.delay_bound = ju.at("delay_bound").get<double>();
    u.qos.violation_prob = ju.at("violation_prob").get<double>();
    u.snr_unlicensed = ju.at("snr_unlicensed").get<double>();
    u.snr_licensed = ju.at("snr_licensed").get<double>();
    s.users.push_back(u);
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_scenario: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_scenario: cannot open " + path);
  out << scenario_to_json(s);
}

}  // namespace lwa
