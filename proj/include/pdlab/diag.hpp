#pragma once

#include <cstdint>
#include <string>

#include "pdlab/capp.hpp"
#include "pdlab/machine.hpp"

namespace pdlab {

inline constexpr uint64_t kDiagBudgetCap = 1ull << 14;  // clocked-compile step cap

// A diagonal input of length n: 1^{n-w} followed by the w = ceil(log2 n)-bit
// machine index, MSB first.
struct DiagInput {
  uint32_t n = 0;
  uint64_t i = 0;

  static uint32_t index_width(uint32_t n);  // ceil(log2 n), n >= 1
  Bits raw() const;
  // False iff x is not of the padded form (the index always parses when the
  // padding is all ones, so well-formed strings parse uniquely).
  static bool parse(const Bits& x, DiagInput* out);
};

// Decision core: compile "b run on x for |x|^d steps" and accept iff the
// canonical acceptance estimate is <= 1/2.
int diag_decide_machine(const Program& b, const Bits& x, const GeneratorConfig& cfg,
                        uint32_t d);

// The diagonal language: malformed inputs reject; otherwise the core applied
// to the machine the input names.
int diag_decide(const Bits& x, const GeneratorConfig& cfg, uint32_t d);

// Uniform ensemble over the circuits compiled from the indexed machines on
// their padded inputs.
struct DiagEnsemble {
  uint32_t n = 0;
  uint32_t d = 0;

  uint32_t index_width() const { return DiagInput::index_width(n); }
  uint64_t support_size() const { return 1ull << index_width(); }
  Dyadic mass(uint64_t i) const;  // uniform; always >= 1/(2n)
  Circuit at(uint64_t i) const;
  Circuit sample(Sampler& s) const;
};
DiagEnsemble diag_ensemble(uint32_t n, uint32_t d);

enum class DiagVerdict { kDiffers, kMatches, kNotApplicable, kUnresolved };
const char* diag_verdict_name(DiagVerdict v);

struct DiagReport {
  DiagVerdict verdict = DiagVerdict::kUnresolved;
  Dyadic exact_mu;     // true acceptance probability of the compiled circuit
  Dyadic estimate_mu;  // canonical estimate the decision used
  bool capp_ok = false;  // estimate within 1/10 of exact
  int decide = -1;       // diagonal decision bit
  int majority = -1;     // the machine's majority answer on this input
};

// Verification core. kNotApplicable when the machine's acceptance probability
// on x is within 1/6 of a fair coin (it breaks the bounded-error promise
// there); kUnresolved when exact evaluation is over budget or the estimate
// missed exact by more than 1/10; otherwise kDiffers iff the diagonal
// decision disagrees with the majority answer.
DiagReport diag_report(const Program& b, const Bits& x, const GeneratorConfig& cfg,
                       uint32_t d);

// Indexed form: i must fit in the index width for n.
DiagReport diag_verify(uint64_t i, uint32_t n, const GeneratorConfig& cfg, uint32_t d);

// A hard-language instance (M, x, 1^t), framed as "hex:bits:1^t".
struct HardInstance {
  Program m;
  Bits x;
  uint32_t t = 0;

  std::string raw() const;
  static HardInstance parse(const std::string& w);  // ValidationError on junk
  void validate() const;                            // t >= 1
};

// The reduction x -> (M, x, 1^t): deterministic, injective, linear time.
HardInstance hardness_reduce(const Program& m, const Bits& x, uint32_t t);

// Accept iff the canonical estimate for "m run on x for t steps" is >= 1/2.
int hard_language_decide(const HardInstance& w, const GeneratorConfig& cfg);

}  // namespace pdlab
