#pragma once

#include <string>

#include "pdlab/circuit.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/lk.hpp"
#include "pdlab/rng.hpp"

namespace pdlab {

// Pads a netlist to exactly `target` bytes with filler the parser ignores (a
// blank line or one comment line). Throws ValidationError if the text is
// already longer than the target.
std::string pad_netlist(const std::string& text, size_t target);

inline constexpr uint64_t kCappEncodingCap = 1ull << 20;  // bytes of netlist
inline constexpr uint32_t kCappExactCap = 24;             // wired-arity cap
inline constexpr uint32_t kCappSeedCap = 24;              // PRG seed enumeration cap

// An acceptance-probability estimation instance: the pair (1^n, C). The
// netlist is padded to exactly n^d bytes, so the encoded size is a function
// of (n, d) alone rather than of the serialization.
struct CappInstance {
  uint32_t n = 0;
  uint32_t d = 0;
  Circuit circuit;
  std::string encoded;  // padded netlist, size exactly n^d

  // d defaults to the manifest's size exponent. Throws BudgetError when n^d
  // exceeds the encoding cap and ValidationError when the circuit or its
  // netlist does not fit inside n^d.
  static CappInstance make(uint32_t n, const Circuit& c);
  static CappInstance make(uint32_t n, uint32_t d, const Circuit& c);

  uint64_t size_bound() const;  // n^d, checked
  void validate() const;
};

struct CappEstimate {
  enum class Mode { kExact, kSampled, kPrg };

  Dyadic mu;
  Mode mode = Mode::kExact;
  bool canonical = true;  // true iff mu is a pure function of the instance
  uint64_t samples = 0;   // enumeration or sample count behind mu

  void validate() const;
};

enum class CappSuccess { kSuccess, kFailure, kUnresolved };

const char* capp_mode_name(CappEstimate::Mode m);
const char* capp_success_name(CappSuccess s);

// Exact acceptance probability under uniform inputs, enumerating only the
// wired input slots (unwired slots cannot change the output). BudgetError
// when more than kCappExactCap slots are wired.
CappEstimate capp_exact(const CappInstance& inst);

// Empirical mean over uniform inputs. The requested count is rounded up to a
// power of two so mu stays dyadic; `samples` records the count used. At s
// samples the estimate is within 1/10 of exact except with probability
// <= 2 exp(-s/50) (Hoeffding at deviation 1/10).
CappEstimate capp_sample(const CappInstance& inst, uint64_t s, Sampler& sampler);

// Exact average of C(G(z)) over all 2^ell seeds, generator output truncated
// to the circuit arity. Deterministic, canonical.
CappEstimate capp_prg(const CappInstance& inst, const NWGenerator& g);

// Derandomized estimator: materializes the configured generator family and
// runs capp_prg. The sampler feeds only the optional smoke check (a coarse
// empirical estimate that must land within 1/4 of the PRG answer); the
// returned estimate is canonical either way.
CappEstimate capp_pseudodet(const CappInstance& inst, const GeneratorConfig& cfg,
                            Sampler& sampler, bool self_check = false);

// Whether the estimate is within 1/10 of the true acceptance probability;
// kUnresolved when exact evaluation is over budget.
CappSuccess capp_success(const CappInstance& inst, const CappEstimate& est);

}  // namespace pdlab
