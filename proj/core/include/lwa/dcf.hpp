#pragma once

#include <vector>

namespace lwa::dcf {

// Contention/backoff parameters of the unlicensed MAC.  Durations are plain
// numbers in whatever time unit the caller works in; every formula in this
// module is consistent under any single unit.  The scenario layer uses
// seconds.
struct DcfParams {
  int w0 = 16;                 // initial contention window (slots)
  int max_attempts = 7;        // attempts per packet before the drop
  double idle_slot = 9e-6;     // idle minislot duration
  double success_slot = 1e-3;  // duration of a slot carrying one transmission
  double collision_slot = 1e-3;  // duration of a slot carrying a collision
  int num_competitors = 0;       // contending WiFi nodes besides the tagged one

  // Window at backoff stage i: pure doubling, no cap.
  double window(int stage) const;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;

  // Convenience: transmission slots sized for a payload at a PHY rate, with
  // everything else at 802.11 defaults.
  static DcfParams from_payload(double payload_bits, double phy_rate, int competitors);
};

// Per-slot transmit probability of a node and the collision probability seen
// by a tagged transmission, at the saturated binary-exponential-backoff
// fixed point.
struct ContentionPoint {
  double transmit_prob = 0.0;   // tau
  double collision_prob = 0.0;  // p_c
};

// Distribution of a generic channel slot observed by the tagged node while
// it counts down: idle minislot, exactly one competitor transmitting, or a
// collision among competitors.
struct SlotPmf {
  double idle = 1.0;
  double success = 0.0;
  double collision = 0.0;
};

// Solves the coupled equations
//   tau = tau(p_c)  (mean backoff over max_attempts doubling stages)
//   p_c = 1 - (1 - tau)^L
// by damped fixed-point iteration with a bisection fallback.  Residual of
// the returned point is below 1e-10; throws std::runtime_error (with the
// last residual in the message) if neither scheme converges.
ContentionPoint solve_fixed_point(const DcfParams& params);

// tau as a function of p_c for the given backoff ladder (exposed for tests).
double transmit_prob_given_collision(double p_c, const DcfParams& params);

SlotPmf slot_pmf(const ContentionPoint& point, const DcfParams& params);

// P_k = probability that a packet sees k collided attempts, k = 0..K-1
// (the last bucket absorbs "reached the final stage").
std::vector<double> retransmission_pmf(const ContentionPoint& point, const DcfParams& params);

// PGF of the generic slot duration, E[z^X], z > 0.  Log-domain evaluation,
// safe for any representable exponent.
double slot_pgf(double z, const SlotPmf& pmf, const DcfParams& params);

// Everything derived from the off-period between two consecutive successful
// transmissions of the tagged node: its PGF/MGF, mean, and the cycle
// transform F(x) = log E[e^{x t_off}] + x t_s whose inverse yields the
// unlicensed-band effective capacity.
class OffTimeModel {
 public:
  OffTimeModel(const DcfParams& params, const ContentionPoint& point);

  const DcfParams& params() const { return params_; }
  const ContentionPoint& point() const { return point_; }
  const SlotPmf& pmf() const { return pmf_; }

  double pgf(double z) const;      // E[z^{t_off}], z > 0
  double log_mgf(double x) const;  // log E[e^{x t_off}]
  double mean() const;             // E[t_off], closed form

  double cycle_log_mgf(double x) const;  // F(x)
  // Inverse of F by geometric bracket growth and 80 bisection steps.
  // Throws std::domain_error for non-finite or unbracketable y.
  double cycle_log_mgf_inverse(double y) const;

 private:
  DcfParams params_;
  ContentionPoint point_;
  SlotPmf pmf_;
  std::vector<double> stage_pmf_;  // P_k
};

}  // namespace lwa::dcf
