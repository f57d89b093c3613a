#include "lwa/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lwa::dcf {

namespace {

// log(sum exp(v_i)) over finite entries; -inf entries are skipped.
double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_expm1(double t) {
  // log(e^t - 1) for t > 0, overflow-safe.
  return t > 690.0 ? t : std::log(std::expm1(t));
}

// log of eta(y) = (1 - y^W) / (W (1 - y)) evaluated at y = e^t.
// This is the PGF of a uniform backoff count on [0, W), with the removable
// singularity at t = 0 handled exactly.
double log_eta(double t, double window) {
  if (window <= 1.0 || t == 0.0) return 0.0;
  if (t > 0.0) {
    if (window * t > 690.0)
      return window * t + std::log1p(-std::exp(-window * t)) - std::log(window) - log_expm1(t);
    return std::log(std::expm1(window * t) / (window * std::expm1(t)));
  }
  // t < 0: both expm1 terms are in (-1, 0); the ratio is safe.
  return std::log(std::expm1(window * t) / (window * std::expm1(t)));
}

}  // namespace

double DcfParams::window(int stage) const { return std::ldexp(static_cast<double>(w0), stage); }

void DcfParams::validate() const {
  std::ostringstream err;
  if (w0 < 1) err << "w0 must be >= 1; ";
  if (max_attempts < 1) err << "max_attempts must be >= 1; ";
  if (num_competitors < 0) err << "num_competitors must be >= 0; ";
  if (!(idle_slot > 0.0)) err << "idle_slot must be > 0; ";
  if (idle_slot > success_slot) err << "idle_slot must not exceed success_slot; ";
  if (idle_slot > collision_slot) err << "idle_slot must not exceed collision_slot; ";
  const auto msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("DcfParams: " + msg);
}

DcfParams DcfParams::from_payload(double payload_bits, double phy_rate, int competitors) {
  if (!(payload_bits > 0.0) || !(phy_rate > 0.0))
    throw std::invalid_argument("DcfParams::from_payload: payload and rate must be > 0");
  DcfParams p;
  p.success_slot = payload_bits / phy_rate;
  p.collision_slot = p.success_slot;
  p.num_competitors = competitors;
  return p;
}

double transmit_prob_given_collision(double p_c, const DcfParams& params) {
  // Renewal over one packet: attempts at stages 0..K-1 reached with
  // probability p^k, each preceded by a mean backoff of (W_k - 1)/2 slots.
  double attempts = 0.0, backoff = 0.0, pk = 1.0;
  for (int k = 0; k < params.max_attempts; ++k) {
    attempts += pk;
    backoff += pk * 0.5 * (params.window(k) - 1.0);
    pk *= p_c;
  }
  return attempts / (attempts + backoff);
}

ContentionPoint solve_fixed_point(const DcfParams& params) {
  params.validate();
  const int competitors = params.num_competitors;
  if (competitors == 0)
    return {transmit_prob_given_collision(0.0, params), 0.0};

  auto collision_of = [&](double tau) {
    return 1.0 - std::pow(1.0 - tau, competitors);
  };

  double p = 0.5;
  double residual = 1.0;
  for (int it = 0; it < 10000; ++it) {
    const double next = collision_of(transmit_prob_given_collision(p, params));
    residual = std::abs(next - p);
    p = 0.5 * p + 0.5 * next;
    if (residual < 1e-13) break;
  }
  if (residual >= 1e-10) {
    // Bisection on tau: h(tau) = tau - tau_formula(p_c(tau)) is strictly
    // increasing, so the root is unique.
    auto h = [&](double tau) { return tau - transmit_prob_given_collision(collision_of(tau), params); };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) <= 0.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    p = collision_of(tau);
    residual = std::abs(tau - transmit_prob_given_collision(p, params));
    if (residual >= 1e-10) {
      std::ostringstream msg;
      msg << "solve_fixed_point: no convergence, last residual " << residual;
      throw std::runtime_error(msg.str());
    }
    return {tau, p};
  }
  return {transmit_prob_given_collision(p, params), p};
}

SlotPmf slot_pmf(const ContentionPoint& point, const DcfParams& params) {
  const int competitors = params.num_competitors;
  const double tau = point.transmit_prob;
  if (tau < 0.0 || tau > 1.0)
    throw std::invalid_argument("slot_pmf: transmit_prob outside [0,1]");
  SlotPmf pmf;
  pmf.idle = std::pow(1.0 - tau, competitors);
  pmf.success = competitors == 0 ? 0.0
                                 : competitors * tau * std::pow(1.0 - tau, competitors - 1);
  pmf.collision = std::max(0.0, 1.0 - pmf.idle - pmf.success);
  return pmf;
}

std::vector<double> retransmission_pmf(const ContentionPoint& point, const DcfParams& params) {
  const double p = point.collision_prob;
  const int k_max = params.max_attempts;
  std::vector<double> pmf(k_max);
  double pk = 1.0;
  for (int k = 0; k < k_max - 1; ++k) {
    pmf[k] = (1.0 - p) * pk;
    pk *= p;
  }
  pmf[k_max - 1] = pk;  // reached the final stage (success or drop)
  return pmf;
}

double slot_pgf(double z, const SlotPmf& pmf, const DcfParams& params) {
  if (!(z > 0.0)) throw std::invalid_argument("slot_pgf: z must be > 0");
  const double x = std::log(z);
  std::vector<double> terms;
  if (pmf.idle > 0.0) terms.push_back(std::log(pmf.idle) + x * params.idle_slot);
  if (pmf.success > 0.0) terms.push_back(std::log(pmf.success) + x * params.success_slot);
  if (pmf.collision > 0.0) terms.push_back(std::log(pmf.collision) + x * params.collision_slot);
  return std::exp(log_sum_exp(terms));
}

OffTimeModel::OffTimeModel(const DcfParams& params, const ContentionPoint& point)
    : params_(params), point_(point) {
  params_.validate();
  pmf_ = slot_pmf(point, params);
  stage_pmf_ = retransmission_pmf(point, params);
}

double OffTimeModel::log_mgf(double x) const {
  if (x == 0.0) return 0.0;  // PGF normalization, exact
  // log X_hat(e^x)
  std::vector<double> slot_terms;
  if (pmf_.idle > 0.0) slot_terms.push_back(std::log(pmf_.idle) + x * params_.idle_slot);
  if (pmf_.success > 0.0) slot_terms.push_back(std::log(pmf_.success) + x * params_.success_slot);
  if (pmf_.collision > 0.0) slot_terms.push_back(std::log(pmf_.collision) + x * params_.collision_slot);
  const double log_slot = log_sum_exp(slot_terms);

  std::vector<double> terms;
  terms.reserve(stage_pmf_.size());
  double eta_sum = 0.0;  // sum of log eta_i(X_hat) for i = 0..k
  for (int k = 0; k < static_cast<int>(stage_pmf_.size()); ++k) {
    eta_sum += log_eta(log_slot, params_.window(k));
    if (stage_pmf_[k] > 0.0)
      terms.push_back(std::log(stage_pmf_[k]) + k * params_.collision_slot * x + eta_sum);
  }
  return log_sum_exp(terms);
}

double OffTimeModel::pgf(double z) const {
  if (!(z > 0.0)) throw std::invalid_argument("OffTimeModel::pgf: z must be > 0");
  return std::exp(log_mgf(std::log(z)));
}

double OffTimeModel::mean() const {
  const double mean_slot = pmf_.idle * params_.idle_slot + pmf_.success * params_.success_slot +
                           pmf_.collision * params_.collision_slot;
  double m = 0.0, backoff = 0.0;
  for (int k = 0; k < static_cast<int>(stage_pmf_.size()); ++k) {
    backoff += 0.5 * (params_.window(k) - 1.0);
    m += stage_pmf_[k] * (k * params_.collision_slot + backoff * mean_slot);
  }
  return m;
}

double OffTimeModel::cycle_log_mgf(double x) const { return log_mgf(x) + x * params_.success_slot; }

double OffTimeModel::cycle_log_mgf_inverse(double y) const {
  if (!std::isfinite(y))
    throw std::domain_error("cycle_log_mgf_inverse: target outside achievable range");
  if (y == 0.0) return 0.0;

  double lo = 0.0, hi = 0.0;
  if (y > 0.0) {
    hi = 1.0;
    int grow = 0;
    while (cycle_log_mgf(hi) < y) {
      hi *= 2.0;
      if (++grow > 2000)
        throw std::domain_error("cycle_log_mgf_inverse: target outside achievable range");
    }
  } else {
    lo = -1.0;
    int grow = 0;
    while (cycle_log_mgf(lo) > y) {
      lo *= 2.0;
      if (++grow > 2000)
        throw std::domain_error("cycle_log_mgf_inverse: target outside achievable range");
    }
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cycle_log_mgf(mid) <= y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lwa::dcf
