#pragma once

#include <cstdint>
#include <string>

#include "pdlab/bits.hpp"

namespace pdlab {

// Deterministic sampler. Streams depend only on (identifier, n, seed), so two
// samplers constructed with equal parameters produce identical draws on every
// platform (we avoid std distributions on purpose: their mappings are
// implementation-defined).
class Sampler {
 public:
  Sampler(const std::string& identifier, uint64_t n, uint64_t seed) {
    state_ = 0x9e3779b97f4a7c15ull ^ seed;
    for (char c : identifier) state_ = splitmix(state_ ^ (uint8_t)c);
    state_ = splitmix(state_ ^ n);
    if (state_ == 0) state_ = 1;
  }
  explicit Sampler(uint64_t seed) : Sampler("default", 0, seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  int next_bit() { return (int)(next_u64() >> 63); }

  // Uniform in [0, bound) via rejection; bound > 0.
  uint64_t next_below(uint64_t bound) {
    uint64_t mask = ~0ull;
    if (bound > 1) {
      int bits = 64 - __builtin_clzll(bound - 1);
      mask = bits == 64 ? ~0ull : ((1ull << bits) - 1);
    } else {
      return 0;
    }
    for (;;) {
      uint64_t v = next_u64() & mask;
      if (v < bound) return v;
    }
  }

  Bits next_bits(uint8_t n) {
    Bits b;
    for (uint8_t i = 0; i < n; i++) b.push_back(next_bit());
    return b;
  }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    return mix(x);
  }

  uint64_t state_;
};

// Smallest power of two >= s (s >= 1). Sampling ops round trial counts up to
// a power of two so empirical means stay exactly dyadic.
inline uint64_t pow2_ceil(uint64_t s) {
  uint64_t p = 1;
  while (p < s) p <<= 1;
  return p;
}

// log2 of a power of two.
inline int pow2_log(uint64_t p) {
  int l = 0;
  while ((1ull << l) < p) l++;
  return l;
}

}  // namespace pdlab
