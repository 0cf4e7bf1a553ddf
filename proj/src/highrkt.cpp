#include "pdlab/highrkt.hpp"

#include <algorithm>
#include <string>

#include "pdlab/distribution.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/manifest.hpp"

namespace pdlab {

namespace {

uint64_t checked_pow(uint32_t n, uint32_t d) {
  if (n < 2 || d < 1) throw ValidationError("rkt-construct: need n >= 2 and d >= 1");
  uint64_t v = 1;
  for (uint32_t i = 0; i < d; i++) {
    if (v > kCappEncodingCap / n) throw BudgetError("rkt-construct: n^d over the encoding cap");
    v *= n;
  }
  return v;
}

}  // namespace

uint32_t RndSearchInstance::m() const { return (uint32_t)ceil_log2(checked_pow(n, d)); }

void RndSearchInstance::validate() const {
  uint32_t len = m();
  if (len < 1) throw ValidationError("rkt-construct: target length must be positive");
  if (len > kCensusMaxLen)
    throw BudgetError("rkt-construct: target length outside the census oracle range");
}

const char* gap_decider_mode_name(GapDeciderMode mode) {
  return mode == GapDeciderMode::kExact ? "exact" : "monte-carlo";
}

Circuit gap_acceptance_circuit(const Bits& a, const ComplexityBudget& b,
                               GapDeciderMode mode, const GapMcConfig& mc) {
  if (mode == GapDeciderMode::kExact) {
    CircuitBuilder cb(0);
    return cb.take(cb.constant(gap_mrkt(a, b) == GapVerdict::kAccept));
  }
  // One clause per candidate: f_i(tape) = "candidate i replays to a on its
  // slice", a sum of minterms over the slice assignments. Accept iff no
  // clause fires, matching gap_mrkt_mc on every tape.
  auto cands = gap_mc_candidates((uint32_t)a.size(), b, mc);
  CircuitBuilder cb(mc.input_bits());
  uint32_t any = cb.constant(false);
  for (uint32_t i = 0; i < (uint32_t)cands.size(); i++) {
    const uint32_t base = i * mc.slice_bits;
    uint32_t clause = cb.constant(false);
    for (uint64_t s = 0; s < (1ull << mc.slice_bits); s++) {
      RunResult rr = exec_program_fn(
          cands[i].machine, cands[i].aux, cands[i].t,
          [&](uint32_t j) { return j < mc.slice_bits ? (int)((s >> j) & 1) : 0; });
      if (!(rr.output == a)) continue;
      uint32_t minterm = cb.constant(true);
      for (uint32_t j = 0; j < mc.slice_bits; j++) {
        uint32_t in = cb.input(base + j);
        minterm = cb.gate_and(minterm, (s >> j) & 1 ? in : cb.gate_not(in));
      }
      clause = cb.gate_or(clause, minterm);
    }
    any = cb.gate_or(any, clause);
  }
  return cb.take(cb.gate_not(any));
}

HighRktResult construct_high_rkt_with(const RndSearchInstance& inst,
                                      const GeneratorConfig& cfg, Sampler& sampler,
                                      const AcceptanceCircuitFn& accept_circuit) {
  inst.validate();
  const uint32_t m = inst.m();
  HighRktResult res;
  for (uint64_t v = 0; v < (1ull << m); v++) {
    Bits a = from_msb_value(v, (uint8_t)m);
    CappInstance ci = CappInstance::make(inst.n, inst.d, accept_circuit(a));
    CappEstimate est = capp_pseudodet(ci, cfg, sampler);
    res.enumerated = v + 1;
    // accept on mu > 1/3 + 1/10
    if (!est.mu.leq_fraction(13, 30)) {
      res.found = true;
      res.value = a;
      res.mu = est.mu;
      return res;
    }
  }
  return res;
}

HighRktResult construct_high_rkt(const RndSearchInstance& inst,
                                 const ComplexityBudget& b, GapDeciderMode mode,
                                 const GeneratorConfig& cfg, Sampler& sampler,
                                 const GapMcConfig& mc) {
  b.validate();
  return construct_high_rkt_with(inst, cfg, sampler, [&](const Bits& a) {
    return gap_acceptance_circuit(a, b, mode, mc);
  });
}

void DeciderSpec::validate() const {
  if (time < 1 || time > kDistributionStepCap)
    throw BudgetError("decider: step budget outside the exact-distribution range");
  if (machine.size() == 0) throw ValidationError("decider: empty program");
}

namespace {

struct Printer {
  Program machine;
  Bits aux;
  uint32_t t = 0;
  uint32_t cost() const {
    return (uint32_t)machine.size_bits() + (uint32_t)aux.size() + (uint32_t)ceil_log2(t);
  }
};

}  // namespace

Fact51Witness fact51_witness(const DeciderSpec& dec, uint32_t n, uint32_t ell) {
  dec.validate();
  if (n < 1 || n > 16) throw BudgetError("fact51: n outside [1, 16]");
  if (ell < 1 || ell > 64) throw BudgetError("fact51: ell outside [1, 64]");
  if (n < 64 && (uint64_t)ell > (1ull << n))
    throw ValidationError("fact51: more strings requested than exist at length n");
  if (dec.advice.size() + n > 64) throw BudgetError("fact51: advice plus input over 64 bits");

  // Membership bits of the first ell strings, decided by majority.
  Bits v;
  for (uint32_t i = 0; i < ell; i++) {
    Bits input = dec.advice;
    Bits x = from_msb_value(i, (uint8_t)n);
    for (uint32_t j = 0; j < x.size(); j++) input.push_back(x.get(j));
    Dyadic p = acceptance_probability(dec.machine, input, dec.time);
    v.push_back(p.geq_fraction(1, 2));
  }

  // Candidate printers, cheapest wins (first on ties). The constant loop
  // emits one bit per two steps, the echo one bit per four; both budgets cut
  // the run exactly at the ell-th output bit.
  std::vector<Printer> cands;
  bool all0 = true, all1 = true;
  for (uint32_t i = 0; i < ell; i++) (v.get(i) ? all0 : all1) = false;
  if (all0)
    cands.push_back({Program::assemble({{Op::kOut0, 0}, {Op::kJmp, 0}}), Bits{}, 2 * ell - 1});
  if (all1)
    cands.push_back({Program::assemble({{Op::kOut1, 0}, {Op::kJmp, 0}}), Bits{}, 2 * ell - 1});
  {
    Program lit;
    for (uint32_t i = 0; i < ell; i++)
      lit.code.push_back(make_instr(v.get(i) ? Op::kOut1 : Op::kOut0));
    cands.push_back({lit, Bits{}, ell});
  }
  cands.push_back({Program::assemble({{Op::kRdi, 0},
                                      {Op::kBrf, 2},
                                      {Op::kOut0, 0},
                                      {Op::kJmp, 0},
                                      {Op::kOut1, 0},
                                      {Op::kJmp, 0}}),
                   v, 4 * ell - 1});
  const Printer* best = &cands[0];
  for (const Printer& p : cands)
    if (p.cost() < best->cost()) best = &p;

  RunResult rr = exec_program_fn(best->machine, best->aux, best->t,
                                 [](uint32_t) { return 0; });
  if (!(rr.output == v)) throw InternalError("fact51: witness replay mismatch");

  Fact51Witness w;
  w.machine = best->machine;
  w.aux = best->aux;
  w.t = best->t;
  w.cost = best->cost();
  w.table = v;
  const Manifest& mf = manifest();
  w.bound = (uint32_t)(mf.fact51_cprime *
                           (ceil_log2(ell) + ceil_log2(dec.time) +
                            (uint64_t)dec.advice.size() + ceil_log2(n)) +
                       mf.fact51_c0);
  if (w.cost > w.bound) throw InternalError("fact51: measured cost exceeds the manifest bound");
  return w;
}

void TruthTableString::validate() const {
  if (n > 16) throw BudgetError("truth table: n outside [0, 16]");
  if (bits.size() != (1ull << n)) throw ValidationError("truth table: length must be 2^n");
  if ((uint64_t)ell > bits.size()) throw ValidationError("truth table: prefix longer than table");
  for (uint8_t b : bits)
    if (b > 1) throw ValidationError("truth table: entries must be bits");
}

uint64_t embed_prefix_length(uint64_t t, const HierarchyParams& hp) {
  hp.validate();
  if (t < 1) throw ValidationError("embedding: step bound must be positive");
  uint64_t scaled = 10ull * (uint64_t)manifest().fact51_cprime * (uint64_t)ceil_log2(t) *
                    hp.eps_den;
  return (scaled + hp.eps_num - 1) / hp.eps_num;  // ceil(10 * cprime * log t / eps)
}

TruthTableString embed_hard_language(
    const std::function<std::vector<uint8_t>(uint32_t)>& supplier, uint32_t n,
    const TimeBoundTable& T, const HierarchyParams& hp) {
  if (n < 1 || n > 16) throw BudgetError("embedding: n outside [1, 16]");
  uint64_t m = embed_prefix_length(T.at(n), hp);
  if (m > (1ull << n))
    throw ValidationError("embedding: prefix does not fit the table (lambda condition)");
  std::vector<uint8_t> prefix = supplier((uint32_t)m);
  if (prefix.size() != m) throw InternalError("embedding: supplier returned the wrong length");
  TruthTableString tt;
  tt.n = n;
  tt.ell = (uint32_t)m;
  tt.bits.assign(1ull << n, 0);
  for (uint64_t i = 0; i < m; i++) tt.bits[i] = prefix[i] & 1;
  tt.validate();
  return tt;
}

Bits extract_string(const std::function<int(const Bits&)>& language, uint32_t n,
                    uint32_t m) {
  if (m > 64) throw BudgetError("extraction: target length over 64 bits");
  if (n > 6 || (1u << n) > m)
    throw ValidationError("extraction: need 2^n <= m");
  Bits y;
  for (uint32_t i = 0; i < (1u << n); i++)
    y.push_back(language(from_msb_value(i, (uint8_t)n)) & 1);
  while (y.size() < m) y.push_back(false);
  return y;
}

}  // namespace pdlab
