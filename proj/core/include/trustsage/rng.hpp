#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace trustsage {

/// One step of the splitmix64 generator; advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a parent seed and a tag.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t state = seed ^ (tag * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag_a,
                              std::uint64_t tag_b) {
  return mix_seed(mix_seed(seed, tag_a), tag_b);
}

/// Maps a 64-bit word onto [0, 1) using its top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Thin wrapper around mt19937_64. The standard distributions are
/// implementation-defined, so uniform reals and bounded integers are derived
/// here directly to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return to_unit(engine_()); }

  /// Uniform integer in [0, bound); bound must be positive.
  std::size_t index(std::size_t bound) {
    const std::uint64_t n = bound;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trustsage
