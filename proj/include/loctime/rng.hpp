#pragma once

// Counter-based randomness. Every replicate and every purpose (jumps,
// holding times, field draws, ...) gets its own key, so results do not
// depend on how replicates are scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace loctime {

using Block = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

// Philox4x64-10 bijection (Salmon et al.).
Block philox4x64(Block ctr, Key key);

enum class StreamTag : std::uint64_t {
  jumps = 1,
  holding = 2,
  field = 3,
  field_aux = 4,
  resample = 5,
  experiment = 6,
};

std::uint64_t splitmix64(std::uint64_t x);
Key derive_key(std::uint64_t seed, std::uint64_t replicate, StreamTag tag);

inline double to_unit_open(std::uint64_t bits) {
  // 53 random bits mapped into (0,1), never hitting either end.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Sequential stream. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t replicate, StreamTag tag)
      : key_(derive_key(seed, replicate, tag)) {}
  explicit RandomStream(Key key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 4) refill();
    return buf_[lane_++];
  }

  double uniform() { return to_unit_open((*this)()); }
  double exponential() { return -std::log(uniform()); }
  double normal() { return normal_(*this); }

  // Uniform integer in [0, n), Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t n);

 private:
  void refill() {
    buf_ = philox4x64({counter_, 0, 0, 0}, key_);
    ++counter_;
    lane_ = 0;
  }

  Key key_;
  std::uint64_t counter_ = 0;
  Block buf_{};
  int lane_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Random-access Exp(1) variables indexed by (site, index). The j-th holding
// time at vertex v is always the same number, whatever happened before.
class ExponentialTable {
 public:
  ExponentialTable(std::uint64_t seed, std::uint64_t replicate, StreamTag tag)
      : key_(derive_key(seed, replicate, tag)) {}

  double operator()(std::uint64_t site, std::uint64_t index) const {
    const Block b = philox4x64({index >> 2, site, 1, 0}, key_);
    return -std::log(to_unit_open(b[index & 3]));
  }

 private:
  Key key_;
};

}  // namespace loctime
