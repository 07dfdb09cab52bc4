#pragma once

#include <cstdint>
#include <span>

namespace twjscc {

// SplitMix64 finalizer.
inline constexpr std::uint64_t kRngGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based generator: the i-th output is a pure function of
// (seed, stream, i), so disjoint streams can be drawn in any order, on any
// number of threads, with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed + kRngGamma) ^
             mix64(stream * 0xD2B74407B1CE6E93ull + kRngGamma)) {}

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * kRngGamma); }

  // Uniform on [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe to pass to log().
  double next_unit_open() { return 1.0 - next_unit(); }

  // Index i with probability pmf[i]; pmf must sum to ~1.  Rounding residue
  // falls back to the last positive-mass index, never to a zero-mass one.
  std::size_t next_category(std::span<const double> pmf) {
    double u = next_unit();
    double acc = 0.0;
    std::size_t last_pos = 0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      if (pmf[i] <= 0.0) continue;
      last_pos = i;
      acc += pmf[i];
      if (u < acc) return i;
    }
    return last_pos;
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace twjscc
