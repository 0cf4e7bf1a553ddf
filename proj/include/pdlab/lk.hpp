#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdlab/bits.hpp"
#include "pdlab/nw.hpp"
#include "pdlab/perm.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Non-decreasing step-count table n -> T(n), either measured by the search
// driver or injected for experiments. Serialized as "n,T" CSV lines.
struct TimeBoundTable {
  enum class Source : uint8_t { kEmpirical = 0, kInjected = 1 };

  std::vector<uint64_t> values;  // values[n] = T(n), defined on [0, size)
  Source source = Source::kInjected;

  static TimeBoundTable flat(uint64_t value, uint32_t max_n);
  static TimeBoundTable parse_csv(const std::string& text);
  std::string to_csv() const;

  uint64_t at(uint32_t n) const;  // ValidationError past the defined range
  void validate() const;          // non-empty, non-decreasing
};

// Scale parameters of the padded-language hierarchy.
struct HierarchyParams {
  uint32_t k = 2;                           // target exponent, >= 1
  uint32_t delta_num = 1, delta_den = 20;   // 0 < delta < 1/18
  uint32_t lambda = 1;                      // padding exponent bound
  uint32_t eps_num = 1, eps_den = 2;        // hardness exponent (embeddings)
  void validate() const;
};

struct GoodLength {
  uint32_t m = 0;
  uint32_t r = 0;    // core width
  uint32_t ell = 0;  // m = r + 2^ell with m > 2r
  bool good = false;
};

// Every m >= 1 splits uniquely as m = r + 2^ell with m > 2r (exactly one
// power of two lies in (m/2, m]); this returns that r.
uint32_t core_width(uint32_t m);

// The unique split plus the step-bound condition 2^ell >= T(i)^(delta/3k)
// for all i <= r, decided in exact integer arithmetic.
GoodLength good_length(uint32_t m, const TimeBoundTable& T, const HierarchyParams& hp);

// The ladder m_i = i + 2^ell(m) for i = 0..r(m). Every member is re-checked
// to be good (InternalError otherwise); ValidationError when m itself is not.
std::vector<uint32_t> good_sequence(uint32_t m, const TimeBoundTable& T,
                                    const HierarchyParams& hp);

// --- Core membership semantics -------------------------------------------
// A core y with |y| >= 6 encodes a target index b = y[0] + 2*y[1] and a d x d
// matrix over GF(13), d = floor(sqrt((|y|-2)/4)); entries are consecutive
// 4-bit fields starting at y[2], least significant bit first, each reduced
// mod 13, leftover bits ignored. Membership is bit b of a fixed relabeling
// of the permanent: surrogate_code is an injection GF(13) -> 4-bit codes
// chosen so that every code bit plane is exactly balanced when the entry
// fields are uniform (the aliasing of 16 field patterns onto 13 residues
// double-weights residues 0, 1, 2, and the code table compensates). Cores
// shorter than 6 bits are non-members.

uint32_t surrogate_code(uint32_t v);  // v in [0, 13)
int surrogate_decode(uint32_t code);  // inverse, or -1 off the image
int surrogate_member(const Bits& core);
PermInstance surrogate_matrix(const Bits& core);  // ValidationError if |core| < 6

// Truth table of k-bit inputs under the padded-language semantics: the core
// is the first core_width(k) bits, the rest is pad. k <= 20.
std::vector<uint8_t> surrogate_table(uint32_t k);

// Design whose sets lead with `front` positions chosen greedily (minimizing
// summed squared overlap with earlier choices) before ascending filler. The
// hard functions above read only the leading core bits of each restriction,
// so spreading those positions is what decorrelates output bits.
Design spread_design(uint32_t ell, uint32_t k, uint32_t m, uint32_t front);

// Materializes any generator description, including the surrogate-backed
// kind that make_table_generator rejects.
NWGenerator generator_from_config(const GeneratorConfig& cfg);

// Membership at length |x|: core = first core_width(|x|) bits, pad ignored.
// advice 0 rejects immediately. budget 0 evaluates the core directly;
// budget > 0 routes the core instance through optimal_search (falling back
// to direct evaluation if no stage answers), which requires a sampler.
int decide_Lk(const Bits& x, const TimeBoundTable& T, const HierarchyParams& hp,
              int advice, uint64_t budget = 0, Sampler* sampler = nullptr);

// Self-corrector at a good length m: runs the matrix self-corrector over the
// core, answering each of its value queries through 4 target-index membership
// queries, each decided by majority over 100m random-pad completions asked of
// the noisy length-m oracle. Tolerates a corrupted fraction up to
// 1/m^corrector_b. Non-good lengths reject.
int lk_selfcorrect(const Bits& x, const std::function<int(const Bits&)>& oracle,
                   const TimeBoundTable& T, const HierarchyParams& hp,
                   uint32_t trials, Sampler& sampler);

struct OptimalResult {
  bool found = false;
  int bit = -1;        // decision bit of the instance's target index
  uint32_t value = 0;  // checked permanent value
  uint64_t stage = 0;  // stage that answered, or the exhausted budget
};

// Stage s = 1, 2, ... runs the s-th program as a value oracle (4 wire
// queries assemble each answer), asks it for a claimed value, and audits the
// claim with the instance checker; the first accepted claim wins. Programs
// get min(s, 256) steps per query and an all-zeros random tape.
OptimalResult optimal_search(const PermInstance& inst, uint64_t budget,
                             Sampler& sampler, uint32_t reps = 20);

// Empirical step-bound table: T(n) = the smallest stage by which a
// 1 - 1/(n+1) fraction of `runs` sampled 1x1 instances are answered, made
// non-decreasing by running max.
TimeBoundTable estimate_T(uint32_t max_n, uint32_t runs, Sampler& sampler);

}  // namespace pdlab
