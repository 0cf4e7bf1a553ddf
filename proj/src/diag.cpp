#include "pdlab/diag.hpp"

#include "pdlab/compile.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/manifest.hpp"

namespace pdlab {

namespace {

uint64_t clock_steps(uint32_t n, uint32_t d) {
  if (n == 0 || d == 0) throw ValidationError("diag: n and d must be positive");
  uint64_t v = 1;
  for (uint32_t i = 0; i < d; i++) {
    if (v > kDiagBudgetCap / n) throw BudgetError("diag: n^d exceeds the compile cap");
    v *= n;
  }
  return v;
}

Circuit compile_clocked(const Program& b, const Bits& x, uint64_t budget) {
  return trim_unused_arity(compile_acceptance(b, x, (uint32_t)budget, (uint32_t)budget));
}

// The (1^n, C) estimation instance for a machine clocked at n^d steps.
CappInstance diag_instance(const Program& b, const Bits& x, uint32_t n, uint32_t d) {
  return CappInstance::make(n, d, compile_clocked(b, x, clock_steps(n, d)));
}

CappEstimate canonical_estimate(const CappInstance& inst, const GeneratorConfig& cfg) {
  Sampler unused("diag-estimate", inst.n, 0);  // never drawn from: no self check
  return capp_pseudodet(inst, cfg, unused);
}

}  // namespace

uint32_t DiagInput::index_width(uint32_t n) {
  if (n == 0) throw ValidationError("diag: input length must be positive");
  return (uint32_t)ceil_log2(n);
}

Bits DiagInput::raw() const {
  uint32_t w = index_width(n);
  if (n > 64) throw BudgetError("diag: input length above the 64-bit cap");
  if (i >= (1ull << w)) throw ValidationError("diag: index does not fit the width");
  Bits x;
  for (uint32_t j = 0; j + w < n; j++) x.push_back(1);
  for (int j = (int)w - 1; j >= 0; j--) x.push_back((i >> j) & 1);
  return x;
}

bool DiagInput::parse(const Bits& x, DiagInput* out) {
  if (x.size() == 0) return false;
  uint32_t n = (uint32_t)x.size();
  uint32_t w = index_width(n);
  for (uint32_t j = 0; j + w < n; j++)
    if (!x.get(j)) return false;
  uint64_t i = 0;
  for (uint32_t j = n - w; j < n; j++) i = (i << 1) | (uint64_t)x.get(j);
  out->n = n;
  out->i = i;
  return true;
}

int diag_decide_machine(const Program& b, const Bits& x, const GeneratorConfig& cfg,
                        uint32_t d) {
  CappInstance inst = diag_instance(b, x, (uint32_t)x.size(), d);
  return canonical_estimate(inst, cfg).mu.leq_fraction(1, 2) ? 1 : 0;
}

int diag_decide(const Bits& x, const GeneratorConfig& cfg, uint32_t d) {
  DiagInput di;
  if (!DiagInput::parse(x, &di)) return 0;
  return diag_decide_machine(machine_at(di.i), x, cfg, d);
}

Dyadic DiagEnsemble::mass(uint64_t i) const {
  if (i >= support_size()) throw ValidationError("diag: ensemble index out of range");
  return Dyadic::pow2_inv((int)index_width());
}

Circuit DiagEnsemble::at(uint64_t i) const {
  DiagInput di{n, i};
  return compile_clocked(machine_at(i), di.raw(), clock_steps(n, d));
}

Circuit DiagEnsemble::sample(Sampler& s) const { return at(s.next_below(support_size())); }

DiagEnsemble diag_ensemble(uint32_t n, uint32_t d) {
  clock_steps(n, d);  // validate the budget up front
  DiagInput{n, 0}.raw();
  return DiagEnsemble{n, d};
}

const char* diag_verdict_name(DiagVerdict v) {
  switch (v) {
    case DiagVerdict::kDiffers: return "DIFFERS";
    case DiagVerdict::kMatches: return "MATCHES";
    case DiagVerdict::kNotApplicable: return "NOT-APPLICABLE";
    case DiagVerdict::kUnresolved: return "UNRESOLVED";
  }
  return "?";
}

DiagReport diag_report(const Program& b, const Bits& x, const GeneratorConfig& cfg,
                       uint32_t d) {
  DiagReport rep;
  CappInstance inst = diag_instance(b, x, (uint32_t)x.size(), d);
  try {
    rep.exact_mu = capp_exact(inst).mu;
  } catch (const BudgetError&) {
    return rep;  // kUnresolved: no ground truth at this size
  }
  Dyadic half(1, 1);
  rep.majority = half <= rep.exact_mu ? 1 : 0;
  if (!abs_diff(rep.exact_mu, half).geq_fraction(1, 6)) {
    rep.verdict = DiagVerdict::kNotApplicable;
    return rep;
  }
  rep.estimate_mu = canonical_estimate(inst, cfg).mu;
  rep.capp_ok = abs_diff(rep.estimate_mu, rep.exact_mu).leq_fraction(1, 10);
  rep.decide = rep.estimate_mu.leq_fraction(1, 2) ? 1 : 0;
  if (!rep.capp_ok) return rep;  // kUnresolved: the estimator missed its band
  rep.verdict = rep.decide != rep.majority ? DiagVerdict::kDiffers : DiagVerdict::kMatches;
  return rep;
}

DiagReport diag_verify(uint64_t i, uint32_t n, const GeneratorConfig& cfg, uint32_t d) {
  DiagInput di{n, i};
  return diag_report(machine_at(i), di.raw(), cfg, d);
}

std::string HardInstance::raw() const {
  validate();
  std::string s = m.hex();
  s += ':';
  s += x.str();
  s += ':';
  s.append(t, '1');
  return s;
}

HardInstance HardInstance::parse(const std::string& w) {
  size_t c1 = w.find(':');
  size_t c2 = w.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ValidationError("hard instance: expected 'hex:bits:1^t'");
  HardInstance h;
  h.m = Program::from_hex(w.substr(0, c1));
  std::string bits = w.substr(c1 + 1, c2 - c1 - 1);
  for (char c : bits)
    if (c != '0' && c != '1') throw ValidationError("hard instance: input must be bits");
  h.x = Bits::parse(bits);
  for (size_t j = c2 + 1; j < w.size(); j++)
    if (w[j] != '1') throw ValidationError("hard instance: clock must be all ones");
  h.t = (uint32_t)(w.size() - c2 - 1);
  h.validate();
  return h;
}

void HardInstance::validate() const {
  if (t == 0) throw ValidationError("hard instance: clock must be at least 1");
}

HardInstance hardness_reduce(const Program& m, const Bits& x, uint32_t t) {
  HardInstance h{m, x, t};
  h.validate();
  return h;
}

int hard_language_decide(const HardInstance& w, const GeneratorConfig& cfg) {
  w.validate();
  if (w.t > kDiagBudgetCap) throw BudgetError("hard instance: clock above the compile cap");
  Circuit c = compile_clocked(w.m, w.x, w.t);
  CappInstance inst = CappInstance::make((uint32_t)w.raw().size(), manifest().capp_c, c);
  return canonical_estimate(inst, cfg).mu.geq_fraction(1, 2) ? 1 : 0;
}

}  // namespace pdlab
