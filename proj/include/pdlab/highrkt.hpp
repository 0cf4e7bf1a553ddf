#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pdlab/bits.hpp"
#include "pdlab/capp.hpp"
#include "pdlab/circuit.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/kolmogorov.hpp"
#include "pdlab/lk.hpp"
#include "pdlab/machine.hpp"
#include "pdlab/nw.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Search envelope for the explicit-construction loop: candidate strings have
// length m = ceil(log2 n^d), so the whole candidate space fits inside the
// estimator's instance-size convention for (n, d).
struct RndSearchInstance {
  uint32_t n = 0;
  uint32_t d = 0;

  uint32_t m() const;  // ceil(log2 n^d); BudgetError when n^d overflows caps
  // The construction target: complexity at least m/2.
  bool meets_requirement(uint32_t value) const { return 2ull * value >= m(); }
  void validate() const;  // m in [1, kCensusMaxLen] so the oracle can check it
};

// How the complexity-gap decider inside the construction consumes randomness.
enum class GapDeciderMode : uint8_t { kExact = 0, kMonteCarlo = 1 };

const char* gap_decider_mode_name(GapDeciderMode mode);

// Compiles "the gap decider accepts a" into a circuit over the decider's
// random tape. Exact mode consumes no randomness, so the circuit is the
// constant gap_mrkt verdict with arity 0. Monte Carlo mode mirrors
// gap_mrkt_mc bit for bit: input slot i*slice_bits + j carries tape bit j of
// candidate i's replay slice, and the circuit outputs 1 iff no candidate
// reproduces a on its slice.
Circuit gap_acceptance_circuit(const Bits& a, const ComplexityBudget& b,
                               GapDeciderMode mode, const GapMcConfig& mc = {});

struct HighRktResult {
  bool found = false;
  Bits value;               // first accepted string in lexicographic order
  uint64_t enumerated = 0;  // strings tried; 2^m when nothing was accepted
  Dyadic mu;                // estimator answer on the accepted string
};

// Pluggable decider compilation: string -> circuit over the decider's tape.
using AcceptanceCircuitFn = std::function<Circuit(const Bits&)>;

// The construction loop: enumerate a over {0,1}^m in lexicographic order,
// estimate each compiled decider circuit with the derandomized estimator,
// and return the first a whose estimate clears 1/3 + 1/10. A decider that
// accepts with probability >= 2/3 always clears the bar when the estimate is
// within 1/10 of exact, and one that accepts with probability <= 1/3 never
// does, so with accurate estimates the output inherits the decider's
// soundness. Canonical: a pure function of (inst, cfg, circuits).
HighRktResult construct_high_rkt_with(const RndSearchInstance& inst,
                                      const GeneratorConfig& cfg, Sampler& sampler,
                                      const AcceptanceCircuitFn& accept_circuit);

// Same loop with the decider fixed to the complexity-gap language at budget
// b, compiled by gap_acceptance_circuit in the given mode.
HighRktResult construct_high_rkt(const RndSearchInstance& inst,
                                 const ComplexityBudget& b, GapDeciderMode mode,
                                 const GeneratorConfig& cfg, Sampler& sampler,
                                 const GapMcConfig& mc = {});

// A language decider given by a toy program plus advice: on input x the
// program runs on advice + x for `time` steps, and membership is the
// majority answer over its random tape.
struct DeciderSpec {
  Program machine;
  Bits advice;         // prepended to every input
  uint32_t time = 16;  // step budget; capped by the exact-distribution limit

  void validate() const;
};

// Printer witness for a truth-table prefix, plus the measured cost and the
// manifest bound it was checked against.
struct Fact51Witness {
  Program machine;
  Bits aux;
  uint32_t t = 0;
  uint32_t cost = 0;   // |machine| + |aux| + ceil(log2 t)
  uint32_t bound = 0;  // cprime * (log l + log time + |advice| + log n) + c0
  Bits table;          // the ell membership bits the witness prints
};

// Runs the decider over the first ell n-bit strings (most-significant-bit
// order), collects the membership bits, and constructs the cheapest printer
// among a fixed family (constant loop, literal, advice echo). The witness is
// replayed to check it prints exactly the collected bits, and its cost is
// asserted against the manifest bound; either failing is an InternalError.
Fact51Witness fact51_witness(const DeciderSpec& dec, uint32_t n, uint32_t ell);

// A language's truth table at input length n, with a designated prefix
// carrying the embedded content; everything past the prefix is zero.
struct TruthTableString {
  uint32_t n = 0;
  uint32_t ell = 0;           // prefix length, <= 2^n
  std::vector<uint8_t> bits;  // length 2^n; bit i = membership of the i-th string

  void validate() const;
};

// Prefix length m(t) = ceil(10 * cprime * log2(t) / eps): how many embedded
// bits the hardness transfer needs at step bound t. eps comes from hp as a
// fraction, cprime from the manifest.
uint64_t embed_prefix_length(uint64_t t, const HierarchyParams& hp);

// Builds the truth table at length n whose first m(T(n)) bits come from the
// supplier (called with the required length) and whose tail is zero. Throws
// ValidationError when the prefix would not fit inside 2^n.
TruthTableString embed_hard_language(
    const std::function<std::vector<uint8_t>(uint32_t)>& supplier, uint32_t n,
    const TimeBoundTable& T, const HierarchyParams& hp);

// The converse direction: flatten a decision procedure's length-n truth
// table into a length-m string, zero-padded. Requires 2^n <= m <= 64.
Bits extract_string(const std::function<int(const Bits&)>& language, uint32_t n,
                    uint32_t m);

}  // namespace pdlab
