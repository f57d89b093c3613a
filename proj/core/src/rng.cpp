#include "lwa/rng.hpp"

#include <cmath>

namespace lwa::rng {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) >> 64);
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(const std::array<std::uint64_t, 4>& ctr,
                                               const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> x = ctr;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t hi0 = mulhi64(kMul0, x[0]);
    const std::uint64_t lo0 = kMul0 * x[0];
    const std::uint64_t hi1 = mulhi64(kMul1, x[2]);
    const std::uint64_t lo1 = kMul1 * x[2];
    x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return x;
}

std::uint64_t Stream::next_u64() {
  if (lane_ >= 4) {
    buf_ = Philox4x64::block({epoch_, block_index_, 0, 0}, {seed_, stream_});
    ++block_index_;
    lane_ = 0;
  }
  return buf_[lane_++];
}

std::uint64_t Stream::uniform_below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  // Reject to the largest multiple of bound to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

double Stream::next_normal() {
  if (have_spare_normal_) {
    have_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(phi);
  have_spare_normal_ = true;
  return r * std::cos(phi);
}

}  // namespace lwa::rng
