#pragma once

#include <cstdint>
#include <random>

namespace uniflow {

/// Deterministic random helpers. mt19937_64 output is fully specified by the
/// standard; the distributions below are hand-rolled so that streams are
/// byte-identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, n), rejection-free enough for test sizes.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
  }

  long int_in(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Uniform in [0,1) with 53 bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double real_in(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Derive an independent stream for a sweep point.
  static Rng derive(std::uint64_t seed, std::uint64_t index) {
    // splitmix-style mixing of (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace uniflow
