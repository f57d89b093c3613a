#include "lwa/effective_capacity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lwa/numerics.hpp"

namespace lwa::ec {

void UserQos::validate() const {
  std::ostringstream err;
  if (!(min_rate > 0.0)) err << "min_rate must be > 0; ";
  if (!(delay_bound > 0.0)) err << "delay_bound must be > 0; ";
  if (!(violation_prob > 0.0 && violation_prob < 1.0)) err << "violation_prob must be in (0,1); ";
  const auto msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("UserQos: " + msg);
}

double UserQos::decay_target() const { return std::log(1.0 / violation_prob) / delay_bound; }

double unlicensed_decay_rate(double delta, double avg_snr, const dcf::OffTimeModel& off) {
  const double c = std::log2(1.0 + avg_snr) * off.params().success_slot;
  return off.cycle_log_mgf_inverse(delta * c);
}

LicensedMoments licensed_exp_moments(double delta, double avg_snr, double frame_length,
                                     double rel_tol) {
  if (!(avg_snr > 0.0)) throw std::invalid_argument("licensed_exp_moments: avg_snr must be > 0");
  if (!(frame_length > 0.0))
    throw std::invalid_argument("licensed_exp_moments: frame_length must be > 0");

  // Truncate where the exponential tail mass drops below 1e-12.
  const double gamma_max = avg_snr * std::log(1e12);
  const double scale = delta * frame_length;
  const double inv_snr = 1.0 / avg_snr;
  auto integrand = [&](double g, std::span<double> out) {
    const double r = std::log2(1.0 + g);
    // Exponent clamp keeps far-out-of-range deltas finite instead of NaN.
    const double e = std::max(-600.0, std::min(600.0, -scale * r - g * inv_snr));
    const double w = std::exp(e) * inv_snr;
    out[0] = w;
    out[1] = r * w;
    out[2] = r * r * w;
  };
  const auto q = num::integrate_gk15(integrand, 3, 0.0, gamma_max, rel_tol, 1e-300, 4000);
  if (!q.converged) {
    std::ostringstream msg;
    msg << "licensed_exp_moments: quadrature did not converge, residuals";
    for (double r : q.residual) msg << ' ' << r;
    throw std::runtime_error(msg.str());
  }
  return {q.values[0], q.values[1], q.values[2]};
}

double licensed_decay_rate(double delta, double avg_snr, double frame_length) {
  const auto m = licensed_exp_moments(delta, avg_snr, frame_length);
  return -std::log(m.e0) / frame_length;
}

double unlicensed_capacity(double bandwidth, double qos_exponent, double avg_snr,
                           const dcf::OffTimeModel& off) {
  if (bandwidth < 0.0) throw std::invalid_argument("unlicensed_capacity: bandwidth must be >= 0");
  if (!(qos_exponent > 0.0))
    throw std::invalid_argument("unlicensed_capacity: qos_exponent must be > 0");
  if (bandwidth == 0.0) return 0.0;
  try {
    return unlicensed_decay_rate(bandwidth * qos_exponent, avg_snr, off) / qos_exponent;
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string("unlicensed_capacity: ") + e.what());
  }
}

double licensed_capacity(double bandwidth, double qos_exponent, double avg_snr,
                         double frame_length) {
  if (bandwidth < 0.0) throw std::invalid_argument("licensed_capacity: bandwidth must be >= 0");
  if (!(qos_exponent > 0.0))
    throw std::invalid_argument("licensed_capacity: qos_exponent must be > 0");
  if (bandwidth == 0.0) return 0.0;
  return licensed_decay_rate(bandwidth * qos_exponent, avg_snr, frame_length) / qos_exponent;
}

double licensed_capacity_closed_form(double bandwidth, double qos_exponent, double avg_snr,
                                     double frame_length) {
  if (bandwidth == 0.0) return 0.0;
  const double q = qos_exponent * bandwidth * frame_length / std::log(2.0);
  const double x = 1.0 / avg_snr;
  // E[e^{-theta beta T log2(1+gamma)}] = e^{1/g} g^{-q} Gamma(1-q, 1/g)
  const double log_e = x - q * std::log(avg_snr) + std::log(num::upper_incomplete_gamma(1.0 - q, x));
  return -log_e / (qos_exponent * frame_length);
}

double delay_violation(double qos_exponent, double capacity, double delay_bound) {
  const double v = std::exp(-qos_exponent * capacity * delay_bound);
  return std::min(1.0, std::max(0.0, v));
}

QosCheckResult aggregate_qos_check(const std::vector<EcPoint>& bands,
                                   const std::vector<int>& selected, const UserQos& qos) {
  if (bands.size() != selected.size())
    throw std::invalid_argument("aggregate_qos_check: bands/selected size mismatch");
  int n_selected = 0;
  for (int s : selected) n_selected += (s != 0);
  if (n_selected == 0) throw std::invalid_argument("aggregate_qos_check: no band selected");

  QosCheckResult res;
  double num = 0.0, den = 0.0;
  for (std::size_t m = 0; m < bands.size(); ++m) {
    const double e = delay_violation(bands[m].qos_exponent, bands[m].capacity, qos.delay_bound);
    const double x = selected[m] ? 1.0 : 0.0;
    num += x * e * bands[m].capacity;
    den += x * bands[m].capacity;
    res.relaxed_lhs += e - 1.0 + x;
    res.relaxed_rhs += qos.violation_prob * x;
  }
  res.exact_lhs = den > 0.0 ? num / den : 1.0;
  res.exact_ok = res.exact_lhs <= qos.violation_prob + 1e-12;
  res.relaxed_ok = res.relaxed_lhs <= res.relaxed_rhs + 1e-12;
  return res;
}

}  // namespace lwa::ec
