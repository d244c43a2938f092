#pragma once

// Deterministic, seedable randomness used everywhere in the library.
// Counter-based splitmix64: portable across platforms and compilers, and
// cheap enough to re-derive independent streams per slot / per trial.

#include <cstdint>
#include <utility>
#include <vector>

namespace mti {

using Seed = std::uint64_t;

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;  // 2^64 / phi

// splitmix64 finalizer (public-domain constants).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Derives an independent stream seed from a base seed and a stream index.
constexpr Seed derive_seed(Seed base, std::uint64_t stream) noexcept {
  return mix64(base ^ mix64(stream + kGoldenGamma));
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(Seed seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * ((~std::uint64_t{0} / bound));
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

// In-place Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace mti
