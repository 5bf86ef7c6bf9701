#pragma once

// Keyed counter-based random streams.
//
// Contract (stable; ports in other languages must match it):
//   key        = mix64(mix64(mix64(seed ^ 0x6A09E667F3BCC909) ^ fnv1a64(tag)) ^ index)
//   output[n]  = mix64(key + n * 0x9E3779B97F4A7C15), n = 1, 2, ...
//   unit       = (output >> 11) * 2^-53                       in [0, 1)
//   normal     = Marsaglia polar method over unit draws, with detmath::log
// mix64 is the SplitMix64 finalizer (Steele, Lea & Flood), fnv1a64 the 64-bit
// FNV-1a hash of the tag bytes. Streams are pure functions of
// (seed, tag, index), so generation order is decoupled from iteration order.
//
// Reference sequence, stream (seed=42, tag="reference", index=0):
// checked in tests/test_rng.cpp and documented in the README.

#include <cstdint>
#include <string_view>
#include <vector>

#include "mapeval/detmath.hpp"

namespace mapeval::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kSeedSalt = 0x6A09E667F3BCC909ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t fnv1a64(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : tag) {
    h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
    h *= 0x100000001B3ull;
  }
  return h;
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                   std::uint64_t index) {
  std::uint64_t k = mix64(seed ^ kSeedSalt);
  k = mix64(k ^ fnv1a64(tag));
  k = mix64(k ^ index);
  return k;
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0)
      : key_(stream_key(seed, tag, index)) {}

  std::uint64_t next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGamma);
  }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal; polar rejection keeps the math to sqrt + detmath::log.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * detmath::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  std::vector<double> normal_vector(std::size_t n) {
    std::vector<double> out(n);
    for (auto& x : out) x = next_normal();
    return out;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mapeval::rng
