#pragma once

#include <cstdint>
#include <optional>

#include "pdlab/bits.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/machine.hpp"
#include "pdlab/nw.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Deterministic for every v < 2^64: Miller-Rabin over the fixed base set
// {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}.
bool is_prime(uint64_t v);

// A prime with a short description: expanding `seed` through the configured
// generator and truncating to n bits yields exactly the binary encoding of
// `prime` (most significant bit first, no forced leading one).
struct SuccinctPrime {
  Bits seed;
  uint64_t prime = 0;
  uint32_t n = 0;
  GeneratorConfig gen;

  void validate() const;  // re-expands, compares, and primality-checks
};

// First seed in lexicographic order whose truncated generator output is
// prime; nullopt when no output is prime (possible at toy scale). Pure
// function of (cfg, n). Caps: seed length <= 24, n <= 64, and the generator
// must emit at least n bits.
std::optional<SuccinctPrime> find_prime_via_prg(const GeneratorConfig& cfg, uint32_t n);

// Empirical frequency of reproducing the canonical target prime by guessing
// an advice bit and a seed at random. A trial hits when the advice guess is
// 1 and the expanded seed encodes the target; with fixed_advice in {0, 1}
// the guess is pinned instead of drawn.
struct SeedRateReport {
  bool applicable = false;  // false when no target prime exists
  uint32_t n = 0;
  uint32_t ell = 0;         // seed length
  uint64_t trials = 0;
  uint64_t hits = 0;
  uint64_t target = 0;      // the canonical prime
  Dyadic bound;             // analytic hit rate: 2^-(ell+1), or 2^-ell pinned
};
SeedRateReport random_seed_prime(uint32_t n, uint64_t trials, Sampler& sampler,
                                 const GeneratorConfig& cfg, int fixed_advice = -1);

// Printer witness for the prime's bits: the seed is baked into the aux
// string and echoed. Only the identity generator's pipeline is expressible
// as a toy program; cost is |machine| + |aux|, reported against the bound
// seed length + manifest skeleton constant, and the replay is checked.
struct PrimeWitness {
  Program machine;
  Bits aux;
  uint32_t t = 0;
  uint32_t cost = 0;
  uint32_t bound = 0;
};
PrimeWitness rk_poly_prime_witness(const SuccinctPrime& sp);

// Exact prime count below 2^n by sieve; n <= 24.
struct PrimeDensity {
  uint32_t n = 0;
  uint64_t primes = 0;
  uint64_t total = 0;  // 2^n
};
PrimeDensity prime_density(uint32_t n);

}  // namespace pdlab
