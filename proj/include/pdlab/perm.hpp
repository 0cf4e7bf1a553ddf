#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdlab/bits.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Arithmetic in GF(p), p prime. Values are always kept reduced.
uint32_t gf_add(uint32_t a, uint32_t b, uint32_t p);
uint32_t gf_sub(uint32_t a, uint32_t b, uint32_t p);
uint32_t gf_mul(uint32_t a, uint32_t b, uint32_t p);
uint32_t gf_pow(uint32_t a, uint64_t e, uint32_t p);
uint32_t gf_inv(uint32_t a, uint32_t p);  // a != 0

bool small_prime(uint32_t v);  // trial division; parameter validation only

// Square matrix over GF(p) with a target bit index: the decision language
// asks for bit `bit` of the permanent mod p.
struct PermInstance {
  uint32_t p = 13;
  uint32_t dim = 1;
  uint32_t bit = 0;
  std::vector<uint32_t> a;  // row-major, dim*dim entries, each < p

  static PermInstance make(uint32_t p, uint32_t dim, std::vector<uint32_t> entries,
                           uint32_t bit = 0);

  uint32_t at(uint32_t i, uint32_t j) const { return a[i * dim + j]; }
  uint32_t& at(uint32_t i, uint32_t j) { return a[i * dim + j]; }

  void validate() const;

  // Minor: drop row 0 and column j (the downward self-reduction step).
  PermInstance minor_first_row(uint32_t j) const;

  // Text form "dim p e00 e01 ...", one value per token (the file format).
  // The target bit travels separately (CLI flag / wire encoding).
  std::string serialize() const;
  static PermInstance parse(const std::string& text);

  // Oracle wire encoding, fits in 64 bits (dim <= 3):
  //   [guard][bit: 2][dim-1: 3][entries row-major, 4 bits each, LSB first]
  // The guard is NOT bit_k(a[0][0]), which for dimension 1 equals the negated
  // decision bit: a constant-size program can answer dimension-1 queries by
  // reading offset 0 alone.
  Bits wire() const;
  static PermInstance from_wire(const Bits& w);

  friend bool operator==(const PermInstance& x, const PermInstance& y) {
    return x.p == y.p && x.dim == y.dim && x.bit == y.bit && x.a == y.a;
  }
};

// Exact permanent mod p, Ryser's inclusion-exclusion formula; dim <= 8.
uint32_t perm_eval(const PermInstance& inst);

// Brute-force permutation sum; the independent oracle for perm_eval.
uint32_t perm_naive(const PermInstance& inst);

// Bit `inst.bit` of the permanent: the surrogate language's membership bit.
int perm_decision_bit(const PermInstance& inst);

using PermOracle = std::function<uint32_t(const PermInstance&)>;

// First-row minor expansion via an oracle for dimension dim-1; makes exactly
// dim queries, all of strictly smaller dimension.
uint32_t perm_dsr(const PermInstance& inst, const PermOracle& oracle);

// Random self-correction: per trial, interpolate the degree-dim polynomial
// t -> Perm(A + tB) from dim+1 distinct nonzero points and read off t = 0;
// the answer is the majority over trials. Correct with probability >= 3/4
// when the oracle errs on at most a 1/(8(dim+1)) fraction of instances.
uint32_t perm_selfcorrect(const PermInstance& inst, const PermOracle& oracle,
                          uint32_t trials, Sampler& sampler);

enum class CheckVerdict : uint8_t { kUnknown = 0, kAccept = 1 };

// Instance checker: dimension <= 2 is audited directly from the entries;
// above that, each round interpolates the prover's minor-line polynomial
// from oracle answers, verifies it against the claimed value, and recurses
// on a random point of the line. Honest oracles accept a correct claim with
// probability 1; any oracle makes a wrong claim accepted with probability
// <= ((dim-1)^2/p + ...) per repetition, summed over the downward chain.
CheckVerdict perm_check(const PermInstance& inst, uint32_t claimed,
                        const PermOracle& oracle, Sampler& sampler,
                        uint32_t reps = 1);

// Identity-block padding: same permanent at a larger dimension.
PermInstance pad_matrix(const PermInstance& inst, uint32_t new_dim);

// Length-framed bit string: str = core . 1 . 0^(length-|core|-1). Padding
// re-frames the original core, so re-padding to a final length equals
// padding there directly.
struct FramedBits {
  Bits core;
  uint8_t length = 0;

  Bits bits() const;
  friend bool operator==(const FramedBits& x, const FramedBits& y) {
    return x.core == y.core && x.length == y.length;
  }
};

FramedBits frame(const Bits& core, uint8_t length);
FramedBits frame(const FramedBits& f, uint8_t length);
Bits unframe(const Bits& padded);  // inverse of bits(); error without marker

}  // namespace pdlab
