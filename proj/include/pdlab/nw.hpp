#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdlab/bits.hpp"
#include "pdlab/circuit.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Combinatorial design: m subsets of [ell], each of size k, pairwise
// intersections at most alpha. The listed order of elements is significant
// because seed restriction reads bits in it; build_design lists sets in
// ascending element order.
struct Design {
  uint32_t ell = 0;
  uint32_t k = 0;
  uint32_t alpha = 0;
  std::vector<std::vector<uint8_t>> sets;

  uint32_t m() const { return (uint32_t)sets.size(); }

  // Exhaustively re-checks every invariant (sizes, ranges, duplicates,
  // pairwise intersections).
  void verify() const;
};

// Greedy construction; throws ValidationError naming the first set index for
// which no admissible candidate exists.
Design build_design(uint32_t ell, uint32_t k, uint32_t m, uint32_t alpha);

// Reorders each set to lead with a distinct representative element (a system
// of distinct representatives, found by bipartite matching; the remaining
// elements stay ascending). A generator whose hard function XORs index bit 0
// into the rest then emits exactly uniform outputs, which is what the
// advice-driven pipeline certifies. Throws ValidationError when no system of
// distinct representatives exists.
Design with_distinct_reps(Design d);

// Pseudorandom generator stretching ell seed bits to m output bits: output
// bit i applies the hard function to the seed restricted to set i. The
// restriction index has bit j = seed[sets[i][j]] (listed order, j low).
struct NWGenerator {
  Design design;
  std::vector<uint8_t> hard_fn;  // truth table on k bits, 2^k entries of 0/1

  uint32_t seed_length() const { return design.ell; }
  uint32_t output_length() const { return design.m(); }

  void validate() const;
};

// G(z) = z: singleton sets {i} with the 1-bit identity table. Used as the
// degenerate generator that makes estimator pipelines exact.
NWGenerator make_identity_generator(uint32_t len);

Bits nw_generate(const NWGenerator& g, const Bits& seed);

// How a report's numbers were obtained.
enum class EstimateMode : uint8_t { kExact = 0, kSampled = 1, kPrg = 2 };

const char* estimate_mode_name(EstimateMode m);

struct DistinguisherReport {
  Dyadic p_uniform;    // acceptance probability on uniform strings
  Dyadic p_generator;  // acceptance probability on generator outputs
  Dyadic advantage;    // |p_uniform - p_generator|
  EstimateMode mode = EstimateMode::kExact;
  uint64_t samples = 0;  // per side; 0 in exact mode
  uint32_t delta_num = 1, delta_den = 10;
  bool distinguishes = false;  // advantage >= delta
};

// Full enumeration of both sides; requires seed_length <= 20 and
// output_length <= 20 (BudgetError beyond), distinguisher arity <= m.
DistinguisherReport advantage_exact(const Circuit& d, const NWGenerator& g,
                                    uint32_t delta_num = 1, uint32_t delta_den = 10);

// Empirical advantage over `samples` draws per side; the count is rounded up
// to a power of two so the means stay dyadic. Seed-deterministic.
DistinguisherReport advantage_sample(const Circuit& d, const NWGenerator& g,
                                     uint64_t samples, Sampler& sampler,
                                     uint32_t delta_num = 1, uint32_t delta_den = 10);

// Result of the hybrid argument: acceptance probabilities of the m+1 hybrid
// distributions (first i bits pseudorandom, rest uniform), the bit position
// with the widest gap, and a next-bit predictor built from the distinguisher
// whose exact success probability is 1/2 + |that gap|.
struct HybridReport {
  bool found = false;        // false iff the total advantage is zero
  uint32_t bit = 0;          // predicted output position (0-based)
  Circuit predictor;         // arity m: slots < bit carry the prefix, the rest
                             // fresh randomness; slot `bit` is the guess carrier
  Dyadic success;            // Pr[predictor output = generator bit]
  Dyadic advantage;          // |success - 1/2|, equals the widest hybrid gap
  Dyadic total;              // |hybrid[m] - hybrid[0]|, the distinguisher advantage
  std::vector<Dyadic> hybrid;  // m+1 acceptance probabilities
};

// Exact hybrid decomposition of a distinguisher's advantage. Same budget
// gates as advantage_exact.
HybridReport hybrid_predictor(const Circuit& d, const NWGenerator& g);

// Declarative generator description, loadable from JSON:
//   {"ell":16,"k":4,"m":8,"alpha":2,"hard_fn":"6996"}    (hex truth table)
//   {"ell":16,"k":5,"m":8,"alpha":2,"hard_fn":"surrogate"}
//   {"hard_fn":"identity","ell":8}
// Hex tables list the value on input index 0 at the most significant bit of
// the first hex digit.
struct GeneratorConfig {
  enum class Kind : uint8_t { kIdentity = 0, kTable = 1, kSurrogate = 2 };
  Kind kind = Kind::kIdentity;
  uint32_t ell = 0, k = 0, m = 0, alpha = 0;
  std::vector<uint8_t> table;  // kTable only

  static GeneratorConfig parse(const std::string& json_text);
  std::string to_json() const;
};

// Materializes kIdentity and kTable configs. kSurrogate needs the structured
// language's truth table and lives with it (generator_from_config).
NWGenerator make_table_generator(const GeneratorConfig& cfg);

// Seed-length recipe ceil(n^(eps_num/eps_den)) shared by the generator
// pipeline and its callers; exact integer arithmetic.
uint32_t prg_seed_length(uint32_t n, uint32_t eps_num, uint32_t eps_den);

// Knobs for the advice-driven generator pipeline. gamma is the hardness
// exponent knob surfaced as configuration; it scales nothing at desk scale
// but is recorded in reports.
struct PseudodetPrgConfig {
  uint32_t eps_num = 4, eps_den = 5;      // seed length: ell = ceil(n^eps)
  uint32_t gamma_num = 1, gamma_den = 2;  // output length: m = ceil(n^gamma)
  uint32_t k = 14;                        // hard-function input width
};

// Advice-driven generator: advice 1 expands the seed through an NW generator
// whose hard function is the structured language's truth table on k-bit
// inputs; advice 0 returns the all-zeros fallback. Defined alongside the
// structured language (lk.cpp) which supplies the table.
Bits pseudodet_prg(const PseudodetPrgConfig& cfg, uint32_t n, const Bits& seed,
                   int advice);

}  // namespace pdlab
