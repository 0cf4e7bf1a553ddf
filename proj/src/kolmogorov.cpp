#include "pdlab/kolmogorov.hpp"

#include <algorithm>
#include <bitset>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "pdlab/distribution.hpp"
#include "pdlab/errors.hpp"

namespace pdlab {

namespace {

// One byte per behavior class: operand-free ops keep operand 0, both HALT
// opcodes collapse to 0xC0, branch/jump operands all matter.
const std::vector<uint8_t>& canon_bytes() {
  static const std::vector<uint8_t> v = [] {
    std::vector<uint8_t> r;
    for (int b = 0; b < 256; ++b) {
      Op op = instr_op((uint8_t)b);
      if (op == Op::kBrf || op == Op::kJmp) {
        r.push_back((uint8_t)b);
      } else if (instr_arg((uint8_t)b) == 0 && (b >> 5) <= 6) {
        r.push_back((uint8_t)b);
      }
    }
    return r;
  }();
  return v;
}

bool has_out(const Program& p) {
  return p.contains(Op::kOut0) || p.contains(Op::kOut1);
}

// Canonical witness enumeration order: machine length asc, machine bytes
// lex asc, then (inside the callback) aux shortlex asc, then t asc. The
// lex-least member of every behavior class uses only canonical bytes, so
// restricting to them never loses the canonical witness.
template <class Fn>
void for_each_canonical_machine(uint32_t max_program_bits, uint64_t stride,
                                uint64_t offset, Fn&& fn) {
  const std::vector<uint8_t>& alpha = canon_bytes();
  uint32_t max_bytes = max_program_bits / 8;
  uint64_t counter = 0;
  std::vector<size_t> digits;
  for (uint32_t len = 1; len <= max_bytes; ++len) {
    digits.assign(len, 0);
    for (;;) {
      Program p;
      p.code.reserve(len);
      for (size_t d : digits) p.code.push_back(alpha[d]);
      if (has_out(p)) {  // printers only: everything else outputs ""
        if (counter % stride == offset) fn(p);
        ++counter;
      }
      size_t i = len;
      while (i > 0) {
        if (++digits[i - 1] < alpha.size()) break;
        digits[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
}

// Aux strings: empty, then length 1..max ending in '1' (a trailing zero is
// never part of a minimal witness since past-end reads are 0 already).
template <class Fn>
void for_each_aux(uint32_t max_aux_bits, bool machine_reads_input, Fn&& fn) {
  fn(Bits());
  if (!machine_reads_input) return;
  for (uint32_t len = 1; len <= max_aux_bits; ++len)
    for (uint64_t v = 1; v < (1ull << len); v += 2) fn(from_msb_value(v, len));
}

// (cost, |M|, M bytes, aux shortlex, t): total order giving the canonical
// witness as the unique minimum; worker merge folds with this.
bool wins(const CensusEntry& a, const CensusEntry& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.machine.code.size() != b.machine.code.size())
    return a.machine.code.size() < b.machine.code.size();
  if (a.machine.code != b.machine.code) return a.machine.code < b.machine.code;
  if (a.aux != b.aux) return a.aux < b.aux;
  return a.t < b.t;
}

// Per-run DFS over randomness with output length capped at m. Records, for
// every step budget t in [t_lo, t_hi], the probability mass each length-m
// string receives as the truncated-at-t output.
struct CensusWalker {
  const Program* prog = nullptr;
  const Bits* aux = nullptr;
  uint32_t m = 0, t_lo = 0, t_hi = 0;
  std::vector<std::map<Bits, Dyadic>> mass;  // [t - t_lo]

  void run(const Program& p, const Bits& a) {
    prog = &p;
    aux = &a;
    mass.assign(t_hi - t_lo + 1, {});
    walk(0, 0, 0, false, Bits(), 0);
  }

  void add(uint32_t t, const Bits& out, uint32_t rnd) {
    Dyadic& d = mass[t - t_lo][out];
    d = d + Dyadic::pow2_inv((int)rnd);
  }
  void settle(uint32_t steps, const Bits& out, uint32_t rnd) {
    if (out.size() != m) return;
    for (uint32_t t = std::max(steps, t_lo); t <= t_hi; ++t) add(t, out, rnd);
  }

  void walk(uint32_t pc, uint32_t in, uint32_t steps, bool flag, Bits out, uint32_t rnd) {
    const std::vector<uint8_t>& code = prog->code;
    for (;;) {
      if (pc >= code.size()) {  // fell off the end: halted, consumes no step
        settle(steps, out, rnd);
        return;
      }
      if (steps >= t_lo && out.size() == m) add(steps, out, rnd);
      if (steps == t_hi) return;
      uint8_t ins = code[pc];
      uint8_t arg = instr_arg(ins);
      ++steps;
      switch (instr_op(ins)) {
        case Op::kRdi:
          flag = in < aux->size() && aux->get(in);
          ++in;
          ++pc;
          break;
        case Op::kBrf:
          pc = flag ? pc + 1 + arg : pc + 1;
          break;
        case Op::kOut1:
        case Op::kOut0:
          out.push_back(instr_op(ins) == Op::kOut1);
          if (out.size() > m) return;  // can never shrink back: prune
          ++pc;
          break;
        case Op::kRnd:
          walk(pc + 1, in, steps, false, out, rnd + 1);
          flag = true;
          ++rnd;
          ++pc;
          break;
        case Op::kJmp:
          pc = arg;
          break;
        case Op::kHalt:
        default:
          settle(steps, out, rnd);
          return;
      }
    }
  }
};

// Deterministic run (optionally forcing RND to read 0): the set of step
// budgets t at which the truncated output equals x is one interval.
struct MatchInterval {
  bool any = false;
  uint32_t lo = 0, hi = 0;
};

MatchInterval det_match_interval(const Program& prog, const Bits& aux, const Bits& x,
                                 uint32_t t_cap, bool rnd_reads_zero) {
  MatchInterval r;
  const std::vector<uint8_t>& code = prog.code;
  uint32_t pc = 0, in = 0, steps = 0, pos = 0;
  bool flag = false, matched = false;
  uint32_t lo = 0;
  // Revisiting (pc, clamped input pointer, flag) without an emission in
  // between means the output is frozen forever.
  std::bitset<2048> seen;
  auto key = [&] { return (pc * 16 + std::min<uint32_t>(in, 9) * 2 + flag) % 2048; };
  for (;;) {
    if (pc >= code.size()) {  // halted: output frozen
      if (matched) return {true, lo, t_cap};
      return r;
    }
    if (steps == t_cap) {
      if (matched) return {true, lo, t_cap};
      return r;
    }
    if (seen[key()]) {  // silent loop: output frozen
      if (matched) return {true, lo, t_cap};
      return r;
    }
    seen[key()] = true;
    uint8_t ins = code[pc];
    uint8_t arg = instr_arg(ins);
    ++steps;
    switch (instr_op(ins)) {
      case Op::kRdi:
        flag = in < aux.size() && aux.get(in);
        in = std::min<uint32_t>(in + 1, (uint32_t)aux.size());
        ++pc;
        break;
      case Op::kBrf:
        pc = flag ? pc + 1 + arg : pc + 1;
        break;
      case Op::kOut1:
      case Op::kOut0: {
        bool bit = instr_op(ins) == Op::kOut1;
        if (matched) return {true, lo, steps - 1};  // extra bit ends the match
        if (pos >= x.size() || x.get(pos) != bit) return r;  // dead
        ++pos;
        if (pos == x.size()) {
          matched = true;
          lo = steps;
        }
        ++pc;
        seen.reset();
        break;
      }
      case Op::kRnd:
        if (!rnd_reads_zero) throw InternalError("det scan on a randomized machine");
        flag = false;
        ++pc;
        break;
      case Op::kJmp:
        pc = arg;
        break;
      case Op::kHalt:
      default:
        if (matched) return {true, lo, t_cap};
        return r;
    }
  }
}

Dyadic half(const Dyadic& d) {
  if (d.e >= 62) throw BudgetError("randomness branching beyond exact range");
  Dyadic h = d;
  h.e += 1;
  return h;
}

// State-merging breadth sweep: Pr[truncated-at-s output == x] for s = 1..t_max.
// States key (pc, clamped input ptr, matched prefix length, flag); mismatched
// runs drop out, halted full matches absorb into `done`.
std::vector<Dyadic> prefix_probs(const Program& prog, const Bits& aux, const Bits& x,
                                 uint32_t t_max) {
  const std::vector<uint8_t>& code = prog.code;
  const uint32_t xlen = (uint32_t)x.size();
  auto pack = [](uint32_t pc, uint32_t in, uint32_t pos, bool flag) {
    return (pc << 12) | (in << 8) | (pos << 1) | (flag ? 1u : 0u);
  };
  std::map<uint32_t, Dyadic> cur, next;
  Dyadic done;
  auto deposit = [&](std::map<uint32_t, Dyadic>& dst, uint32_t pc, uint32_t in,
                     uint32_t pos, bool flag, const Dyadic& mu) {
    if (pc >= code.size()) {
      if (pos == xlen) done = done + mu;
      return;
    }
    Dyadic& d = dst[pack(pc, in, pos, flag)];
    d = d + mu;
  };
  deposit(cur, 0, 0, 0, false, Dyadic::one());
  std::vector<Dyadic> probs(t_max);
  for (uint32_t s = 1; s <= t_max; ++s) {
    next.clear();
    for (const auto& [key, mu] : cur) {
      uint32_t pc = key >> 12, in = (key >> 8) & 0xF, pos = (key >> 1) & 0x7F;
      bool flag = key & 1;
      uint8_t ins = code[pc];
      uint8_t arg = instr_arg(ins);
      switch (instr_op(ins)) {
        case Op::kRdi: {
          bool bit = in < aux.size() && aux.get(in);
          deposit(next, pc + 1, std::min<uint32_t>(in + 1, (uint32_t)aux.size()), pos,
                  bit, mu);
          break;
        }
        case Op::kBrf:
          deposit(next, flag ? pc + 1 + arg : pc + 1, in, pos, flag, mu);
          break;
        case Op::kOut1:
        case Op::kOut0: {
          bool bit = instr_op(ins) == Op::kOut1;
          if (pos < xlen && x.get(pos) == bit) deposit(next, pc + 1, in, pos + 1, flag, mu);
          break;  // otherwise dead: emitted past or against x
        }
        case Op::kRnd: {
          Dyadic h = half(mu);
          deposit(next, pc + 1, in, pos, false, h);
          deposit(next, pc + 1, in, pos, true, h);
          break;
        }
        case Op::kJmp:
          deposit(next, arg, in, pos, flag, mu);
          break;
        case Op::kHalt:
        default:
          if (pos == xlen) done = done + mu;
          break;
      }
    }
    cur.swap(next);
    Dyadic p = done;
    for (const auto& [key, mu] : cur)
      if (((key >> 1) & 0x7F) == xlen) p = p + mu;
    probs[s - 1] = p;
    if (cur.empty()) {
      for (uint32_t s2 = s + 1; s2 <= t_max; ++s2) probs[s2 - 1] = done;
      break;
    }
  }
  return probs;
}

struct SweepMode {
  bool fixed_t = false;   // cost drops the ceil(log t) term
  uint32_t t_lo = 1, t_hi = 1;
};

// Shared kernel: sweep all canonical (machine, aux, t) and fold the canonical
// minimum per length-m string into a table. Worker partitioning is a pure
// stride over machines; the fold order cannot change the result because the
// update relation is a total order.
std::vector<CensusEntry> sweep_table(uint32_t m, const ComplexityBudget& b,
                                     const SweepMode& mode, unsigned workers) {
  std::vector<CensusEntry> table(1ull << m);
  if (mode.t_lo > mode.t_hi) return table;
  auto run_worker = [&](uint64_t stride, uint64_t offset, std::vector<CensusEntry>& out) {
    CensusWalker w;
    w.m = m;
    w.t_lo = mode.t_lo;
    w.t_hi = mode.t_hi;
    for_each_canonical_machine(b.max_program_bits, stride, offset, [&](const Program& p) {
      bool reads = p.contains(Op::kRdi);
      for_each_aux(b.max_aux_bits, reads, [&](const Bits& aux) {
        w.run(p, aux);
        for (uint32_t t = mode.t_lo; t <= mode.t_hi; ++t) {
          for (const auto& [s, mu] : w.mass[t - mode.t_lo]) {
            if (!mu.geq_fraction(b.delta_num, b.delta_den)) continue;
            CensusEntry cand;
            cand.value = (uint32_t)p.size_bits() + (uint32_t)aux.size() +
                         (mode.fixed_t ? 0 : ceil_log2(t));
            cand.machine = p;
            cand.aux = aux;
            cand.t = t;
            cand.prob = mu;
            CensusEntry& cur = out[msb_first_value(s)];
            if (wins(cand, cur)) cur = cand;
          }
        }
      });
    });
  };
  if (workers <= 1) {
    run_worker(1, 0, table);
    return table;
  }
  std::vector<std::vector<CensusEntry>> parts(workers);
  std::vector<std::exception_ptr> errs(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    parts[w].resize(table.size());
    threads.emplace_back([&, w] {
      try {
        run_worker(workers, w, parts[w]);
      } catch (...) {
        errs[w] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  for (const auto& part : parts)
    for (size_t i = 0; i < table.size(); ++i)
      if (part[i].value != kNoWitness && wins(part[i], table[i])) table[i] = part[i];
  return table;
}

// a^ea <= b^eb, exact. Validated ranges (bases <= 64ish, exponents <= 16)
// keep both products inside __int128.
bool pow_leq(uint64_t a, uint64_t ea, uint64_t b, uint64_t eb) {
  __int128 lhs = 1, rhs = 1;
  for (uint64_t i = 0; i < ea; ++i) lhs *= (__int128)a;
  for (uint64_t i = 0; i < eb; ++i) rhs *= (__int128)b;
  return lhs <= rhs;
}

void validate_eps(uint64_t eps_num, uint64_t eps_den) {
  if (eps_num == 0 || eps_den == 0 || eps_num >= eps_den)
    throw ValidationError("promise exponent must sit in (0,1)");
  if (eps_den > 16) throw ValidationError("promise exponent denominator above 16");
}

}  // namespace

void ComplexityBudget::validate() const {
  if (max_program_bits < 8 || max_program_bits > 24)
    throw BudgetError("program budget outside the exact sweep range [8,24]");
  if (max_aux_bits > 12) throw BudgetError("aux budget above exact sweep range");
  if (max_log_t > 5) throw BudgetError("step budget above exact sweep range");
  if (delta_den == 0 || delta_num == 0 || delta_num > delta_den ||
      2 * delta_num <= delta_den)
    throw ValidationError("delta must sit in (1/2, 1]");
}

uint32_t literal_print_bound(uint32_t len) { return 8 * (len + 1) + ceil_log2(len + 1); }

ComplexityReport measure_kt(const Bits& x, const ComplexityBudget& b) {
  b.validate();
  if (x.empty()) throw ValidationError("measure wants a nonempty string");
  ComplexityReport r;
  if (x.size() > b.max_t()) return r;
  CensusEntry best;
  for_each_canonical_machine(b.max_program_bits, 1, 0, [&](const Program& p) {
    for_each_aux(b.max_aux_bits, p.contains(Op::kRdi), [&](const Bits& aux) {
      MatchInterval iv = det_match_interval(p, aux, x, b.max_t(), true);
      if (!iv.any) return;
      CensusEntry cand{(uint32_t)p.size_bits() + (uint32_t)aux.size() + ceil_log2(iv.lo),
                       p, aux, iv.lo, Dyadic::one()};
      if (wins(cand, best)) best = cand;
    });
  });
  if (best.value == kNoWitness) return r;
  r.found = true;
  r.value = best.value;
  r.machine = best.machine;
  r.aux = best.aux;
  r.t = best.t;
  r.prob = best.prob;
  return r;
}

ComplexityReport measure_rkt(const Bits& x, const ComplexityBudget& b) {
  b.validate();
  if (x.empty()) throw ValidationError("measure wants a nonempty string");
  ComplexityReport r;
  if (x.size() > b.max_t()) return r;
  CensusEntry best;
  for_each_canonical_machine(b.max_program_bits, 1, 0, [&](const Program& p) {
    bool randomized = p.contains(Op::kRnd);
    for_each_aux(b.max_aux_bits, p.contains(Op::kRdi), [&](const Bits& aux) {
      if (!randomized) {
        MatchInterval iv = det_match_interval(p, aux, x, b.max_t(), false);
        if (!iv.any) return;
        CensusEntry cand{(uint32_t)p.size_bits() + (uint32_t)aux.size() + ceil_log2(iv.lo),
                         p, aux, iv.lo, Dyadic::one()};
        if (wins(cand, best)) best = cand;
        return;
      }
      std::vector<Dyadic> probs = prefix_probs(p, aux, x, b.max_t());
      for (uint32_t t = 1; t <= b.max_t(); ++t) {
        if (!probs[t - 1].geq_fraction(b.delta_num, b.delta_den)) continue;
        CensusEntry cand{(uint32_t)p.size_bits() + (uint32_t)aux.size() + ceil_log2(t),
                         p, aux, t, probs[t - 1]};
        if (wins(cand, best)) best = cand;
      }
    });
  });
  if (best.value == kNoWitness) return r;
  r.found = true;
  r.value = best.value;
  r.machine = best.machine;
  r.aux = best.aux;
  r.t = best.t;
  r.prob = best.prob;
  return r;
}

ComplexityReport measure_rk_t(const Bits& x, uint32_t t, const ComplexityBudget& b) {
  b.validate();
  if (x.empty()) throw ValidationError("measure wants a nonempty string");
  if (t == 0) throw ValidationError("step budget must be positive");
  if (t > 4096) throw BudgetError("fixed step budget above exact sweep range");
  ComplexityReport r;
  if (x.size() > t) return r;
  CensusEntry best;
  for_each_canonical_machine(b.max_program_bits, 1, 0, [&](const Program& p) {
    bool randomized = p.contains(Op::kRnd);
    for_each_aux(b.max_aux_bits, p.contains(Op::kRdi), [&](const Bits& aux) {
      Dyadic prob;
      if (!randomized) {
        MatchInterval iv = det_match_interval(p, aux, x, t, false);
        if (!iv.any || t < iv.lo || t > iv.hi) return;
        prob = Dyadic::one();
      } else {
        prob = prefix_probs(p, aux, x, t).back();
        if (!prob.geq_fraction(b.delta_num, b.delta_den)) return;
      }
      CensusEntry cand{(uint32_t)p.size_bits() + (uint32_t)aux.size(), p, aux, t, prob};
      if (wins(cand, best)) best = cand;
    });
  });
  if (best.value == kNoWitness) return r;
  r.found = true;
  r.value = best.value;
  r.machine = best.machine;
  r.aux = best.aux;
  r.t = best.t;
  r.prob = best.prob;
  return r;
}

std::map<uint32_t, uint64_t> Census::histogram() const {
  std::map<uint32_t, uint64_t> h;
  for (const CensusEntry& e : entries) h[e.value]++;
  return h;
}

Census rkt_census(uint32_t m, const ComplexityBudget& b, unsigned workers) {
  b.validate();
  if (m == 0 || m > kCensusMaxLen) throw BudgetError("census length outside [1,12]");
  Census c;
  c.m = m;
  SweepMode mode;
  mode.fixed_t = false;
  mode.t_lo = m;  // printing m bits takes at least m steps
  mode.t_hi = b.max_t();
  c.entries = sweep_table(m, b, mode, workers);
  return c;
}

Census rk_t_census(uint32_t m, uint32_t t, const ComplexityBudget& b, unsigned workers) {
  b.validate();
  if (m == 0 || m > kCensusMaxLen) throw BudgetError("census length outside [1,12]");
  if (t == 0 || t > b.max_t()) throw ValidationError("census step budget outside [1,max_t]");
  Census c;
  c.m = m;
  SweepMode mode;
  mode.fixed_t = true;
  mode.t_lo = t;
  mode.t_hi = t;
  if (m > t) mode.t_lo = 1, mode.t_hi = 0;  // nothing printable: empty table
  c.entries = sweep_table(m, b, mode, workers);
  return c;
}

Census kt_census(uint32_t m, const ComplexityBudget& b) {
  b.validate();
  if (m == 0 || m > kCensusMaxLen) throw BudgetError("census length outside [1,12]");
  Census c;
  c.m = m;
  c.entries.resize(1ull << m);
  for_each_canonical_machine(b.max_program_bits, 1, 0, [&](const Program& p) {
    for_each_aux(b.max_aux_bits, p.contains(Op::kRdi), [&](const Bits& aux) {
      // Zero-tape run until the output reaches m bits (it can only grow).
      const std::vector<uint8_t>& code = p.code;
      uint32_t pc = 0, in = 0, steps = 0;
      bool flag = false;
      Bits out;
      std::bitset<2048> seen;
      while (pc < code.size() && steps < b.max_t()) {
        uint32_t key = (pc * 16 + std::min<uint32_t>(in, 9) * 2 + flag) % 2048;
        if (seen[key]) return;  // silent loop: output frozen short of m
        seen[key] = true;
        uint8_t ins = code[pc];
        uint8_t arg = instr_arg(ins);
        ++steps;
        switch (instr_op(ins)) {
          case Op::kRdi:
            flag = in < aux.size() && aux.get(in);
            in = std::min<uint32_t>(in + 1, (uint32_t)aux.size());
            ++pc;
            break;
          case Op::kBrf:
            pc = flag ? pc + 1 + arg : pc + 1;
            break;
          case Op::kOut1:
          case Op::kOut0:
            out.push_back(instr_op(ins) == Op::kOut1);
            seen.reset();
            ++pc;
            if (out.size() == m) {
              CensusEntry cand{(uint32_t)p.size_bits() + (uint32_t)aux.size() +
                                   ceil_log2(steps),
                               p, aux, steps, Dyadic::one()};
              CensusEntry& cur = c.entries[msb_first_value(out)];
              if (wins(cand, cur)) cur = cand;
              return;
            }
            break;
          case Op::kRnd:
            flag = false;  // deterministic-tape semantics
            ++pc;
            break;
          case Op::kJmp:
            pc = arg;
            break;
          case Op::kHalt:
          default:
            return;
        }
      }
    });
  });
  return c;
}

const Census& rkt_census_cached(uint32_t m, const ComplexityBudget& b) {
  using Key = std::tuple<uint32_t, uint32_t, uint32_t, uint32_t, uint64_t, uint64_t>;
  static std::mutex mu;
  static std::map<Key, Census> cache;
  Key k{m, b.max_program_bits, b.max_aux_bits, b.max_log_t, b.delta_num, b.delta_den};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, rkt_census(m, b, 1)).first;
  return it->second;
}

GapVerdict gap_mrkt(const Bits& y, const ComplexityBudget& b) {
  b.validate();
  if (y.empty() || y.size() > kCensusMaxLen)
    throw BudgetError("gap decider needs census-range lengths");
  uint32_t v = rkt_census_cached((uint32_t)y.size(), b).at(y).value;
  uint32_t m = (uint32_t)y.size();
  if (v == kNoWitness || 4 * v >= 3 * m) return GapVerdict::kAccept;
  return GapVerdict::kReject;
}

std::vector<CensusEntry> gap_mc_candidates(uint32_t m, const ComplexityBudget& b,
                                           const GapMcConfig& cfg) {
  b.validate();
  if (m == 0) throw ValidationError("gap decider wants a positive length");
  // 4*cost < quad: default quad is 3m (cost under the accept threshold 3m/4).
  uint64_t quad = cfg.cost_ceiling ? 4ull * cfg.cost_ceiling : 3ull * m;
  std::vector<CensusEntry> out;
  uint32_t t = b.max_t();
  for_each_canonical_machine(b.max_program_bits, 1, 0, [&](const Program& p) {
    if (out.size() >= cfg.candidates) return;
    if (!p.contains(Op::kRnd)) return;
    uint32_t cost = (uint32_t)p.size_bits() + ceil_log2(t);
    if (4ull * cost >= quad) return;
    // Keep only machines whose output actually depends on the tape.
    OutputDistribution dist =
        output_distribution(p, Bits(), std::min(t, kDistributionStepCap));
    if (dist.mass.size() < 2) return;
    out.push_back(CensusEntry{cost, p, Bits(), t, Dyadic()});
  });
  return out;
}

GapVerdict gap_mrkt_mc(const Bits& y, const ComplexityBudget& b, const GapMcConfig& cfg,
                       const Bits& tape) {
  b.validate();
  if (y.empty()) throw ValidationError("gap decider wants a nonempty string");
  if (tape.size() != cfg.input_bits())
    throw ValidationError("mc decider wants exactly candidates*slice_bits random bits");
  std::vector<CensusEntry> cands = gap_mc_candidates((uint32_t)y.size(), b, cfg);
  for (size_t i = 0; i < cands.size(); ++i) {
    size_t base = i * cfg.slice_bits;
    RunResult rr = exec_program_fn(
        cands[i].machine, cands[i].aux, cands[i].t,
        [&](uint32_t j) { return j < cfg.slice_bits ? (int)tape.get(base + j) : 0; });
    if (rr.output == y) return GapVerdict::kReject;  // cheap witness replayed y
  }
  return GapVerdict::kAccept;
}

PromiseClass promise_classify(const Bits& x, uint32_t t, uint64_t eps_num,
                              uint64_t eps_den, const ComplexityBudget& b) {
  validate_eps(eps_num, eps_den);
  uint64_t n = x.size();
  ComplexityReport r = measure_rk_t(x, t, b);
  if (r.found && pow_leq(r.value, eps_den, n, eps_num)) return PromiseClass::kYes;
  if (!r.found || r.value + 1 >= n) return PromiseClass::kNo;
  return PromiseClass::kGap;
}

PromiseSets promise_instances(uint32_t n, uint64_t eps_num, uint64_t eps_den,
                              const ComplexityBudget& b) {
  b.validate();
  validate_eps(eps_num, eps_den);
  if (n == 0 || n > kCensusMaxLen) throw BudgetError("promise length outside [1,12]");
  // Thresholds must not overlap: largest YES value floor(n^eps) below n-1.
  uint64_t yes_max = 0;
  while (yes_max + 1 < n && pow_leq(yes_max + 1, eps_den, n, eps_num)) ++yes_max;
  if (yes_max + 1 >= n) throw ValidationError("promise thresholds overlap at this length");
  PromiseSets ps;
  ps.n = n;
  ps.t = b.max_t();
  Census c = rk_t_census(n, ps.t, b);
  for (size_t i = 0; i < c.entries.size(); ++i) {
    uint32_t v = c.entries[i].value;
    Bits x = from_msb_value((uint64_t)i, (uint8_t)n);
    if (v != kNoWitness && v <= yes_max)
      ps.yes.push_back(x);
    else if (v == kNoWitness || v + 1 >= n)
      ps.no.push_back(x);
    else
      ++ps.gap_count;
  }
  return ps;
}

}  // namespace pdlab
