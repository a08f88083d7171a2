// Counter-based random streams (Philox4x32-10).  Every electron owns
// independent substreams keyed by (seed, electron index, purpose), so results
// are bit-identical for a fixed seed regardless of scheduling or worker count.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fmc {

struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Purposes keep logically distinct draws on disjoint counters: the trajectory
// stream is untouched by beam sampling or pair-decay decisions.
enum class StreamPurpose : std::uint32_t {
  beam_sampling = 0,
  trajectory = 1,
  pair_decay = 2,
};

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t electron_index, StreamPurpose purpose)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        base_{0u, 0u, static_cast<std::uint32_t>(electron_index),
              static_cast<std::uint32_t>(((electron_index >> 32) & 0x00FFFFFFull) |
                                         (static_cast<std::uint64_t>(purpose) << 24))} {}

  // uniform double in [0, 1) with 53 random bits
  double uniform() {
    if (cache_full_) {
      cache_full_ = false;
      return cache_;
    }
    auto ctr = base_;
    ctr[0] = static_cast<std::uint32_t>(draw_);
    ctr[1] = static_cast<std::uint32_t>(draw_ >> 32);
    ++draw_;
    const auto out = Philox4x32::block(ctr, key_);
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    cache_ = static_cast<double>(b >> 11) * 0x1.0p-53;
    cache_full_ = true;
    return static_cast<double>(a >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double normal() {
    if (normal_full_) {
      normal_full_ = false;
      return normal_cache_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    normal_cache_ = r * std::sin(2.0 * M_PI * u2);
    normal_full_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  // normal truncated to +-limit sigma (redraws; deterministic per stream)
  double truncated_normal(double limit = 5.0) {
    for (;;) {
      const double z = normal();
      if (std::abs(z) <= limit) return z;
    }
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::uint64_t draw_ = 0;
  double cache_ = 0.0;
  bool cache_full_ = false;
  double normal_cache_ = 0.0;
  bool normal_full_ = false;
};

}  // namespace fmc
