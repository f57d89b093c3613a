#include "lwa/mc_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "lwa/rng.hpp"

namespace lwa::sim {

void SimConfig::validate() const {
  dcf.validate();
  if (horizon_slots <= warmup_slots)
    throw std::invalid_argument("SimConfig: horizon_slots must exceed warmup_slots");
}

namespace {

// One saturated DCF node: backoff stage and remaining counter.
struct Node {
  int stage = 0;
  std::uint64_t counter = 0;
};

// Shared slot engine.  Each call advances one slot and reports its duration
// and what the tagged node (index 0) did in it.
class SlotEngine {
 public:
  SlotEngine(const dcf::DcfParams& params, std::uint64_t seed)
      : params_(params) {
    const int n = params.num_competitors + 1;
    nodes_.resize(n);
    streams_.reserve(n);
    for (int i = 0; i < n; ++i) streams_.emplace_back(seed, static_cast<std::uint64_t>(i));
    for (int i = 0; i < n; ++i) redraw(i, 0);
  }

  struct SlotOutcome {
    double duration = 0.0;
    int transmitters = 0;
    bool tagged_tx = false;
    bool tagged_success = false;
    bool tagged_packet_end = false;  // success or drop
    int tagged_stage_at_end = 0;     // collisions this packet saw, capped at K-1
    bool competitor_tx = false;
  };

  SlotOutcome step(std::uint64_t slot) {
    SlotOutcome out;
    transmitters_.clear();
    for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
      if (nodes_[i].counter == 0) transmitters_.push_back(i);

    for (auto& node : nodes_)
      if (node.counter > 0) --node.counter;

    if (transmitters_.empty()) {
      out.duration = params_.idle_slot;
      return out;
    }

    const bool collided = transmitters_.size() > 1;
    out.transmitters = static_cast<int>(transmitters_.size());
    out.duration = collided ? params_.collision_slot : params_.success_slot;
    for (int i : transmitters_) {
      if (i != 0) out.competitor_tx = true;
      Node& node = nodes_[i];
      if (!collided) {
        if (i == 0) {
          out.tagged_tx = true;
          out.tagged_success = true;
          out.tagged_packet_end = true;
          out.tagged_stage_at_end = std::min(node.stage, params_.max_attempts - 1);
        }
        node.stage = 0;
      } else {
        if (i == 0) out.tagged_tx = true;
        ++node.stage;
        if (node.stage >= params_.max_attempts) {
          // Packet dropped; window resets and the node stays backlogged.
          if (i == 0) {
            out.tagged_packet_end = true;
            out.tagged_stage_at_end = params_.max_attempts - 1;
          }
          node.stage = 0;
        }
      }
      redraw(i, slot);
    }
    return out;
  }

 private:
  void redraw(int node, std::uint64_t slot) {
    streams_[node].reset_epoch(slot);
    const auto window = static_cast<std::uint64_t>(params_.window(nodes_[node].stage));
    nodes_[node].counter = streams_[node].uniform_below(window);
  }

  dcf::DcfParams params_;
  std::vector<Node> nodes_;
  std::vector<rng::Stream> streams_;
  std::vector<int> transmitters_;
};

}  // namespace

DcfSimResult simulate_dcf(const SimConfig& config) {
  config.validate();
  SlotEngine engine(config.dcf, config.seed);

  DcfSimResult res;
  res.off.retrans_hist.assign(config.dcf.max_attempts, 0);
  res.off.mgf_grid = config.mgf_grid;
  std::vector<double> mgf_sums(config.mgf_grid.size(), 0.0);

  double off_acc = 0.0;
  bool measuring_off = false;  // true once a tagged success has been seen
  double off_sum = 0.0;
  std::uint64_t competitor_busy = 0;

  for (std::uint64_t slot = 0; slot < config.horizon_slots; ++slot) {
    const auto out = engine.step(slot);
    const bool counted = slot >= config.warmup_slots;

    if (counted) {
      ++res.slots;
      res.total_attempts += static_cast<std::uint64_t>(out.transmitters);
      if (out.competitor_tx) ++competitor_busy;
      if (out.tagged_tx) {
        ++res.tagged_attempts;
        if (!out.tagged_success) ++res.tagged_collisions;
      }
      if (out.tagged_packet_end) ++res.off.retrans_hist[out.tagged_stage_at_end];
    }

    if (out.tagged_success) {
      if (measuring_off && counted) {
        ++res.off.samples;
        off_sum += off_acc;
        for (std::size_t i = 0; i < mgf_sums.size(); ++i)
          mgf_sums[i] += std::exp(config.mgf_grid[i] * off_acc);
        if (config.keep_samples) res.off_samples.push_back(off_acc);
      }
      off_acc = 0.0;
      measuring_off = true;
    } else if (measuring_off) {
      off_acc += out.duration;
    }
  }

  if (res.slots > 0) {
    const double nodes = static_cast<double>(config.dcf.num_competitors + 1);
    res.tau_hat =
        static_cast<double>(res.total_attempts) / (static_cast<double>(res.slots) * nodes);
    res.p_c_hat = static_cast<double>(competitor_busy) / static_cast<double>(res.slots);
  }
  if (res.tagged_attempts > 0)
    res.collision_rate =
        static_cast<double>(res.tagged_collisions) / static_cast<double>(res.tagged_attempts);
  if (res.off.samples > 0) {
    res.off.mean = off_sum / static_cast<double>(res.off.samples);
    res.off.mgf_values.resize(mgf_sums.size());
    for (std::size_t i = 0; i < mgf_sums.size(); ++i)
      res.off.mgf_values[i] = mgf_sums[i] / static_cast<double>(res.off.samples);
  }
  return res;
}

void write_samples(const std::vector<double>& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_samples: cannot open " + path);
  for (double v : samples) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    unsigned char le[8];
    for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(le), 8);
  }
}

QueueResult simulate_onoff_queue(const SimConfig& dcf_config, const QueueConfig& queue) {
  dcf_config.validate();
  if (!(queue.service_rate > 0.0)) throw std::invalid_argument("queue: service_rate must be > 0");
  if (queue.arrival_rate < 0.0) throw std::invalid_argument("queue: arrival_rate must be >= 0");
  if (!(queue.delay_bound >= 0.0)) throw std::invalid_argument("queue: delay_bound must be >= 0");

  // Stability gate against the long-run mean service rate.
  const auto point = dcf::solve_fixed_point(dcf_config.dcf);
  const dcf::OffTimeModel off(dcf_config.dcf, point);
  const double ts = dcf_config.dcf.success_slot;
  const double mean_rate = queue.service_rate * ts / (ts + off.mean());
  if (queue.arrival_rate >= mean_rate)
    throw std::invalid_argument("queue: arrival rate " + std::to_string(queue.arrival_rate) +
                                " not below mean service rate " + std::to_string(mean_rate) +
                                " (unstable)");

  SlotEngine engine(dcf_config.dcf, queue.seed);
  const double lambda = queue.arrival_rate;

  // Exact fluid bookkeeping.  We sweep the service timeline; within each
  // serving subinterval departures are linear in the bit index, so the
  // violating measure is a closed-form interval per subinterval.
  double now = 0.0;
  double arrived = 0.0;
  double served = 0.0;
  double violated_bits = 0.0;
  double measured_bits = 0.0;
  double warmup_time = 0.0;
  bool warmup_known = false;

  QueueResult res;
  res.utilization = lambda / mean_rate;

  auto process_serving = [&](double t0, double dur, double rate) {
    // Serve from `served` while arrivals continue; split where the queue
    // empties.  delay(b) = t0 + (b - served)/rate - b/lambda on a busy span.
    double t = t0;
    double remaining = dur;
    while (remaining > 1e-18) {
      double queue_bits = arrived - served;
      if (queue_bits <= 1e-12 && rate >= lambda) {
        // Queue empty and the server keeps up: bits depart on arrival.
        const double db = lambda * remaining;
        arrived += db;
        served += db;
        if (warmup_known && t >= warmup_time) measured_bits += db;
        t += remaining;
        remaining = 0.0;
        break;
      }
      // Busy span: either the whole remainder, or until the queue empties.
      double span = remaining;
      if (rate > lambda && queue_bits > 0.0)
        span = std::min(span, queue_bits / (rate - lambda));
      const double b_lo = served;
      const double b_hi = served + rate * span;
      // delay at bit b: d(b) = t + (b - b_lo)/rate - b/lambda
      const double d_lo = t - b_lo / lambda;
      const double d_hi = t + (b_hi - b_lo) / rate - b_hi / lambda;
      if (warmup_known) {
        const double depart_lo = t;  // departure time of b_lo
        // Only count bits departing after warmup.
        double lo = b_lo, hi = b_hi;
        if (depart_lo < warmup_time) {
          const double skip = (warmup_time - t) * rate;
          lo = std::min(b_hi, b_lo + skip);
        }
        if (hi > lo) {
          const double width = b_hi - b_lo;
          double viol_lo = lo, viol_hi = hi;
          // d(b) is linear; find sub-interval where d(b) > bound.
          const double slope = (d_hi - d_lo);  // over the full [b_lo, b_hi]
          if (std::abs(slope) < 1e-300) {
            if (d_lo <= queue.delay_bound) viol_lo = viol_hi;  // none violate
          } else {
            const double b_star = b_lo + (queue.delay_bound - d_lo) / slope * width;
            if (slope > 0) {
              viol_lo = std::max(lo, b_star);
              viol_hi = hi;
            } else {
              viol_lo = lo;
              viol_hi = std::min(hi, b_star);
            }
          }
          measured_bits += hi - lo;
          if (viol_hi > viol_lo) violated_bits += viol_hi - viol_lo;
        }
      }
      arrived += lambda * span;
      served = b_hi;
      t += span;
      remaining -= span;
    }
    arrived += 0.0;
    now = t;
  };

  for (std::uint64_t slot = 0; slot < queue.horizon_slots; ++slot) {
    const auto out = engine.step(slot);
    if (!warmup_known && slot >= queue.warmup_slots) {
      warmup_known = true;
      warmup_time = now;
    }
    if (out.tagged_success) {
      if (warmup_known) ++res.busy_cycles;
      process_serving(now, out.duration, queue.service_rate);
    } else {
      arrived += lambda * out.duration;
      now += out.duration;
    }
  }

  // Bits still queued whose waited time already exceeds the bound are
  // violations regardless of when they eventually depart.
  if (warmup_known && arrived > served) {
    const double backlog = arrived - served;
    // bit b in (served, arrived]: waited = now - b/lambda
    const double b_cut = (now - queue.delay_bound) * lambda;
    if (b_cut > served) {
      const double v = std::min(arrived, b_cut) - served;
      violated_bits += v;
      measured_bits += v;
    }
    (void)backlog;
  }

  res.total_bits = measured_bits;
  res.violation_prob = measured_bits > 0.0 ? violated_bits / measured_bits : 0.0;
  return res;
}

}  // namespace lwa::sim
