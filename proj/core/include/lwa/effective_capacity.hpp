#pragma once

#include <vector>

#include "lwa/dcf.hpp"

namespace lwa::ec {

// Per-user statistical QoS requirement.
struct UserQos {
  double min_rate = 1e6;        // bits/second
  double delay_bound = 0.2;     // seconds
  double violation_prob = 0.05;  // in (0, 1)

  void validate() const;
  // Decay rate q = ln(1/violation_prob) / delay_bound; a band meets the
  // per-band delay condition iff its theta*C is at least q.
  double decay_target() const;
};

struct BandChannel {
  double avg_snr = 10.0;  // linear scale
  int band = 1;           // 1 = unlicensed, 2 = licensed
};

// One band's operating point for a user.
struct EcPoint {
  double bandwidth = 0.0;     // Hz
  double qos_exponent = 0.0;  // theta, 1/bits
  double delta = 0.0;         // bandwidth * theta
  double a = 0.0;             // 1 / theta
  double capacity = 0.0;      // effective capacity, bits/second
};

// ---- Per-unit-a forms (the delta-parameterized decay rates theta*C) ----

// Unlicensed: F^{-1}(delta * log2(1+snr) * t_s); concave and increasing in delta.
double unlicensed_decay_rate(double delta, double avg_snr, const dcf::OffTimeModel& off);

// Rayleigh expectation moments for the licensed band, one adaptive
// quadrature pass:  e0 = E[e^{-delta T r}], e1 = E[r e^{-delta T r}],
// e2 = E[r^2 e^{-delta T r}] with r = log2(1+gamma), gamma ~ Exp(mean snr).
struct LicensedMoments {
  double e0 = 1.0, e1 = 0.0, e2 = 0.0;
};
LicensedMoments licensed_exp_moments(double delta, double avg_snr, double frame_length,
                                     double rel_tol = 1e-9);

// Licensed: -log(e0)/T; concave and increasing in delta.
double licensed_decay_rate(double delta, double avg_snr, double frame_length);

// ---- Effective capacities ----

// (1/theta) F^{-1}(beta * theta * log2(1+snr) * t_s); 0 when beta = 0.
double unlicensed_capacity(double bandwidth, double qos_exponent, double avg_snr,
                           const dcf::OffTimeModel& off);

// -(1/(theta T)) log E[e^{-theta beta T log2(1+gamma)}] by adaptive
// quadrature of the defining integral; 0 when beta = 0.
double licensed_capacity(double bandwidth, double qos_exponent, double avg_snr,
                         double frame_length);

// Diagnostic only: the same expectation through the upper incomplete gamma
// function, E = e^{1/g} g^{-q} Gamma(1-q, 1/g) with q = theta*beta*T/ln 2.
// Equivalent to the Whittaker-function closed form; not the computation path.
double licensed_capacity_closed_form(double bandwidth, double qos_exponent, double avg_snr,
                                     double frame_length);

// exp(-theta * capacity * delay_bound), clamped to [0, 1].
double delay_violation(double qos_exponent, double capacity, double delay_bound);

// Aggregate delay-QoS check across bands for one user: the exact ratio form
// and its separable relaxation, evaluated side by side.
struct QosCheckResult {
  double exact_lhs = 0.0;    // sum x e C / sum x C   (1 if no selected capacity)
  double relaxed_lhs = 0.0;  // sum_m (e_m - 1 + x_m)
  double relaxed_rhs = 0.0;  // P_th * sum_m x_m
  bool exact_ok = false;
  bool relaxed_ok = false;
};
QosCheckResult aggregate_qos_check(const std::vector<EcPoint>& bands,
                                   const std::vector<int>& selected, const UserQos& qos);

}  // namespace lwa::ec
