#pragma once

#include <array>
#include <cstdint>

namespace lwa::rng {

// Philox4x64-10 counter-based generator (Salmon et al., SC'11), the same
// variant NumPy exposes as numpy.random.Philox.  A block is a pure function
// of (counter, key), so any draw in a simulation is addressable: we key
// streams by (global seed, node id) and use the counter words for
// (slot epoch, draw index).  Reference vectors in the tests were produced
// with NumPy.
struct Philox4x64 {
  std::array<std::uint64_t, 4> counter{0, 0, 0, 0};
  std::array<std::uint64_t, 2> key{0, 0};

  static std::array<std::uint64_t, 4> block(const std::array<std::uint64_t, 4>& ctr,
                                            const std::array<std::uint64_t, 2>& key);
};

// Sequential view over the Philox stream addressed by (seed, stream_id, epoch).
// Draws beyond the first block advance the draw-index counter word.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t epoch = 0)
      : seed_(seed), stream_(stream_id), epoch_(epoch) {}

  void reset_epoch(std::uint64_t epoch) {
    epoch_ = epoch;
    block_index_ = 0;
    lane_ = 4;  // force refill
  }

  std::uint64_t next_u64();

  // Uniform double in [0, 1) with 53 random bits (NumPy convention).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, bound) via rejection on the top bits.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Standard normal via Box-Muller (deterministic two-draw form).
  double next_normal();

 private:
  std::uint64_t seed_, stream_, epoch_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 4> buf_{};
  unsigned lane_ = 4;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace lwa::rng
