#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pdlab/bits.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/machine.hpp"

namespace pdlab {

// Search space for printer witnesses: programs up to max_program_bits, aux
// strings up to max_aux_bits, step budgets up to 2^max_log_t, and the success
// threshold delta (> 1/2 so a witness prints a unique string).
struct ComplexityBudget {
  uint32_t max_program_bits = 24;
  uint32_t max_aux_bits = 8;
  uint32_t max_log_t = 4;
  uint64_t delta_num = 2, delta_den = 3;

  uint32_t max_t() const { return 1u << max_log_t; }
  void validate() const;  // throws ValidationError if caps or delta are off
};

inline constexpr uint32_t kNoWitness = 0xFFFFFFFFu;
inline constexpr uint32_t kCensusMaxLen = 12;

struct ComplexityReport {
  bool found = false;
  uint32_t value = kNoWitness;  // |M|+|a|+ceil(log t); fixed-t drops the log term
  Program machine;
  Bits aux;
  uint32_t t = 0;
  Dyadic prob;             // witness probability mass on x
  bool exhausted = true;   // the full budget was searched
};

// Deterministic printer cost (RND reads 0): min |M|+|a|+ceil(log t).
ComplexityReport measure_kt(const Bits& x, const ComplexityBudget& b);
// Probabilistic printer cost: the run must output x with probability >= delta.
ComplexityReport measure_rkt(const Bits& x, const ComplexityBudget& b);
// Fixed step budget t: minimizes |M|+|a| only. Exact for t <= 4096 via a
// state-merging sweep, so t well beyond the distribution cap is fine.
ComplexityReport measure_rk_t(const Bits& x, uint32_t t, const ComplexityBudget& b);

// Cost of printing x one OUT instruction per bit.
uint32_t literal_print_bound(uint32_t len);

struct CensusEntry {
  uint32_t value = kNoWitness;
  Program machine;
  Bits aux;
  uint32_t t = 0;
  Dyadic prob;
};

struct Census {
  uint32_t m = 0;
  std::vector<CensusEntry> entries;  // indexed by the string's MSB-first value
  const CensusEntry& at(const Bits& x) const { return entries[msb_first_value(x)]; }
  std::map<uint32_t, uint64_t> histogram() const;  // value -> count, kNoWitness last
};

// Exact witness sweep over every length-m string. Worker partitioning changes
// nothing observable: per-string minima merge under a total order.
Census rkt_census(uint32_t m, const ComplexityBudget& b, unsigned workers = 1);
// Same sweep at one fixed step budget, cost |M|+|a|.
Census rk_t_census(uint32_t m, uint32_t t, const ComplexityBudget& b,
                   unsigned workers = 1);
// Deterministic-tape census (RND reads 0): one zero-tape run per witness.
Census kt_census(uint32_t m, const ComplexityBudget& b);
// Process-wide cache for the probabilistic census (several callers re-enter).
const Census& rkt_census_cached(uint32_t m, const ComplexityBudget& b);

// Decides the complexity-gap problem on |y| = m: accept iff the swept value
// reaches ceil(3m/4) (strings with no witness in budget count as +infinity).
enum class GapVerdict { kReject = 0, kAccept = 1 };
GapVerdict gap_mrkt(const Bits& y, const ComplexityBudget& b);

// Monte Carlo variant: instead of the exact sweep, replay a fixed list of
// cheap candidate witnesses on tape slices drawn from an explicit random
// string, and reject iff some candidate reproduces y. Exists so the
// downstream construction can compile a decider that genuinely consumes
// randomness; the exact mode stays the reference.
struct GapMcConfig {
  uint32_t candidates = 4;
  uint32_t slice_bits = 2;
  uint32_t cost_ceiling = 0;  // 0: use the accept threshold ceil(3m/4)
  uint32_t input_bits() const { return candidates * slice_bits; }
};
GapVerdict gap_mrkt_mc(const Bits& y, const ComplexityBudget& b,
                       const GapMcConfig& cfg, const Bits& tape);
// The candidate witnesses the MC decider replays, in canonical order.
std::vector<CensusEntry> gap_mc_candidates(uint32_t m, const ComplexityBudget& b,
                                           const GapMcConfig& cfg);

// Fixed-time promise instances: YES iff value^eps_den <= n^eps_num (i.e.
// value <= n^eps), NO iff value >= n-1 or no witness exists in budget.
enum class PromiseClass { kYes, kNo, kGap };
struct PromiseSets {
  uint32_t n = 0, t = 0;
  std::vector<Bits> yes, no;
  uint64_t gap_count = 0;
};
PromiseSets promise_instances(uint32_t n, uint64_t eps_num, uint64_t eps_den,
                              const ComplexityBudget& b);
PromiseClass promise_classify(const Bits& x, uint32_t t, uint64_t eps_num,
                              uint64_t eps_den, const ComplexityBudget& b);

}  // namespace pdlab
