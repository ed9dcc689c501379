#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace grec {

// Deterministic 64-bit generator (splitmix64). std::mt19937_64 would be
// portable, but the standard distributions and std::shuffle are
// implementation-defined, so every draw here is pinned down explicitly and
// seeded runs match across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Unbiased integer in [0, bound), bound > 0, by rejection sampling.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream tags. Tagged derivation lets one user-facing seed feed several
// independent streams (centers vs noise, per-trial experiments, partitions).
inline constexpr std::uint64_t kStreamCenters = 0xC1;
inline constexpr std::uint64_t kStreamNoise = 0xC2;
inline constexpr std::uint64_t kStreamPartition = 0xC3;
inline constexpr std::uint64_t kStreamTrial = 0xC4;
inline constexpr std::uint64_t kStreamSplit = 0xC5;
inline constexpr std::uint64_t kStreamRepeat = 0xC6;
inline constexpr std::uint64_t kStreamCalibrate = 0xC7;

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
  Rng mixer(seed);
  const std::uint64_t a = mixer.next_u64();
  Rng folder(a ^ (tag * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
  return folder.next_u64();
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_stream(derive_stream(seed, tag1), tag2);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag1, std::uint64_t tag2,
                                   std::uint64_t tag3) {
  return derive_stream(derive_stream(seed, tag1, tag2), tag3);
}

// Seeded Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace grec
