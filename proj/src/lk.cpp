#include "pdlab/lk.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pdlab/errors.hpp"
#include "pdlab/machine.hpp"
#include "pdlab/manifest.hpp"

namespace pdlab {

namespace {

// base^exp <= 2^e, decided exactly. The accumulator is a little-endian
// 32-bit-limb integer; the loop exits early once the product's bit length
// passes e + 1, so the working size stays O(e).
bool pow_leq_pow2(uint64_t base, uint32_t exp, uint64_t e) {
  if (base <= 1 || exp == 0) return true;
  if (e >= 64ull * exp) return true;  // base < 2^64
  std::vector<uint32_t> acc{1};
  auto bit_length = [&]() -> uint64_t {
    uint32_t top = acc.back();
    uint64_t bits = 32ull * (acc.size() - 1);
    while (top) {
      top >>= 1;
      bits++;
    }
    return bits;
  };
  for (uint32_t i = 0; i < exp; i++) {
    unsigned __int128 carry = 0;
    for (auto& limb : acc) {
      unsigned __int128 t = (unsigned __int128)limb * base + carry;
      limb = (uint32_t)t;
      carry = t >> 32;
    }
    while (carry) {
      acc.push_back((uint32_t)carry);
      carry >>= 32;
    }
    if (bit_length() > e + 1) return false;
  }
  uint64_t bl = bit_length();
  if (bl <= e) return true;
  if (bl > e + 1) return false;
  // bit length exactly e + 1: equal to 2^e iff it is a single set bit
  int ones = 0;
  for (uint32_t limb : acc) ones += __builtin_popcount(limb);
  return ones == 1;
}

// Entries of the core's matrix: consecutive 4-bit fields from bit 2.
std::vector<uint32_t> core_entries(const Bits& core, uint32_t d) {
  std::vector<uint32_t> e;
  e.reserve(d * d);
  for (uint32_t idx = 0; idx < d * d; idx++) {
    uint32_t u = 0;
    for (uint32_t j = 0; j < 4; j++) u |= (uint32_t)core.get(2 + 4 * idx + j) << j;
    e.push_back(u % 13);
  }
  return e;
}

uint32_t core_dim(size_t len) {
  uint32_t d = 0;
  while ((uint64_t)(d + 1) * (d + 1) <= (len - 2) / 4) d++;
  return d;
}

Bits core_prefix(const Bits& x, uint32_t r) {
  uint64_t mask = r >= 64 ? ~0ull : ((1ull << r) - 1);
  return Bits(x.w & mask, (uint8_t)r);
}

}  // namespace

TimeBoundTable TimeBoundTable::flat(uint64_t value, uint32_t max_n) {
  TimeBoundTable t;
  t.values.assign((size_t)max_n + 1, value);
  t.source = Source::kInjected;
  t.validate();
  return t;
}

TimeBoundTable TimeBoundTable::parse_csv(const std::string& text) {
  TimeBoundTable t;
  t.source = Source::kInjected;
  std::istringstream in(text);
  std::string line;
  size_t next = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    uint64_t n = 0, v = 0;
    char comma = 0;
    if (!(ls >> n >> comma >> v) || comma != ',')
      throw ValidationError("time table: expected 'n,T' lines");
    if (n != next) throw ValidationError("time table: rows must list n = 0, 1, ... in order");
    t.values.push_back(v);
    next++;
  }
  t.validate();
  return t;
}

std::string TimeBoundTable::to_csv() const {
  std::string out;
  for (size_t n = 0; n < values.size(); n++)
    out += std::to_string(n) + "," + std::to_string(values[n]) + "\n";
  return out;
}

uint64_t TimeBoundTable::at(uint32_t n) const {
  if (n >= values.size())
    throw ValidationError("time table: T(" + std::to_string(n) + ") is not defined");
  return values[n];
}

void TimeBoundTable::validate() const {
  if (values.empty()) throw ValidationError("time table: empty");
  for (size_t n = 1; n < values.size(); n++)
    if (values[n] < values[n - 1]) throw ValidationError("time table: not non-decreasing");
}

void HierarchyParams::validate() const {
  if (k < 1 || k > 1024) throw ValidationError("hierarchy: k must be in [1, 1024]");
  if (delta_num == 0 || delta_den == 0 || delta_den > (1u << 20))
    throw ValidationError("hierarchy: delta must be a positive fraction, den <= 2^20");
  // 0 < delta < 1/18, strictly
  if ((uint64_t)delta_num * 18 >= delta_den)
    throw ValidationError("hierarchy: delta must be below 1/18");
  if (lambda < 1 || lambda > 64) throw ValidationError("hierarchy: lambda must be in [1, 64]");
  if (eps_num == 0 || eps_den == 0 || eps_num > (1u << 20) || eps_den > (1u << 20))
    throw ValidationError("hierarchy: eps must be a positive fraction, parts <= 2^20");
}

uint32_t core_width(uint32_t m) {
  if (m == 0) throw ValidationError("core width: length must be positive");
  uint32_t ell = 31 - (uint32_t)__builtin_clz(m);
  return m - (1u << ell);
}

GoodLength good_length(uint32_t m, const TimeBoundTable& T, const HierarchyParams& hp) {
  hp.validate();
  GoodLength g;
  g.m = m;
  if (m == 0) return g;
  g.ell = 31 - (uint32_t)__builtin_clz(m);
  g.r = m - (1u << g.ell);
  // 2^ell >= T(i)^(delta/3k)  <=>  T(i)^delta_num <= 2^(ell * 3k * delta_den)
  uint64_t e = (uint64_t)g.ell * 3 * hp.k * hp.delta_den;
  g.good = true;
  for (uint32_t i = 0; i <= g.r; i++)
    if (!pow_leq_pow2(T.at(i), hp.delta_num, e)) {
      g.good = false;
      break;
    }
  return g;
}

std::vector<uint32_t> good_sequence(uint32_t m, const TimeBoundTable& T,
                                    const HierarchyParams& hp) {
  GoodLength g = good_length(m, T, hp);
  if (!g.good) throw ValidationError("good sequence: length is not good");
  std::vector<uint32_t> seq;
  seq.reserve(g.r + 1);
  for (uint32_t i = 0; i <= g.r; i++) {
    uint32_t mi = i + (1u << g.ell);
    GoodLength gi = good_length(mi, T, hp);
    if (!gi.good || gi.r != i || gi.ell != g.ell)
      throw InternalError("good sequence: member failed the goodness re-check");
    seq.push_back(mi);
  }
  return seq;
}

uint32_t surrogate_code(uint32_t v) {
  // Injection GF(13) -> 4-bit codes. Under uniform 4-bit entry fields the
  // residues 0, 1, 2 carry double weight (16 patterns fold onto 13 values);
  // this table places them so that each code bit plane carries total weight
  // exactly 8 of 16 — every membership bit is exactly unbiased at dimension 1.
  static constexpr uint32_t kCode[13] = {0, 15, 6, 1, 3, 4, 7, 8, 9, 10, 11, 12, 13};
  if (v >= 13) throw ValidationError("surrogate code: value outside GF(13)");
  return kCode[v];
}

int surrogate_decode(uint32_t code) {
  if (code >= 16) return -1;
  for (uint32_t v = 0; v < 13; v++)
    if (surrogate_code(v) == code) return (int)v;
  return -1;
}

int surrogate_member(const Bits& core) {
  if (core.size() < 6) return 0;
  uint32_t d = core_dim(core.size());
  if (d > 8) throw BudgetError("surrogate: core encodes a matrix beyond dimension 8");
  uint32_t b = (uint32_t)core.get(0) + 2u * (uint32_t)core.get(1);
  PermInstance inst = PermInstance::make(13, d, core_entries(core, d), b);
  return (int)((surrogate_code(perm_eval(inst)) >> b) & 1);
}

PermInstance surrogate_matrix(const Bits& core) {
  if (core.size() < 6) throw ValidationError("surrogate: core shorter than 6 bits");
  uint32_t d = core_dim(core.size());
  if (d > 8) throw BudgetError("surrogate: core encodes a matrix beyond dimension 8");
  uint32_t b = (uint32_t)core.get(0) + 2u * (uint32_t)core.get(1);
  return PermInstance::make(13, d, core_entries(core, d), b);
}

std::vector<uint8_t> surrogate_table(uint32_t k) {
  if (k == 0 || k > 20) throw BudgetError("surrogate table: width must be in [1, 20]");
  uint32_t r = core_width(k);
  // Membership reads only the core, so build the 2^r block and tile it.
  size_t block = (size_t)1 << r;
  std::vector<uint8_t> base(block);
  for (size_t idx = 0; idx < block; idx++)
    base[idx] = (uint8_t)surrogate_member(Bits((uint64_t)idx, (uint8_t)r));
  std::vector<uint8_t> table((size_t)1 << k);
  for (size_t idx = 0; idx < table.size(); idx++) table[idx] = base[idx & (block - 1)];
  return table;
}

Design spread_design(uint32_t ell, uint32_t k, uint32_t m, uint32_t front) {
  if (ell == 0 || ell > 24) throw BudgetError("spread design: ell must be in [1, 24]");
  if (k == 0 || k > ell) throw ValidationError("spread design: need 1 <= k <= ell");
  if (front == 0 || front > k) throw ValidationError("spread design: need 1 <= front <= k");
  if (m == 0 || m > 64) throw ValidationError("spread design: need 1 <= m <= 64");

  std::vector<uint64_t> fronts;
  for (uint32_t i = 0; i < m; i++) {
    uint64_t best = 0, best_cost = ~0ull;
    uint64_t cand = (1ull << front) - 1;
    while (cand < (1ull << ell)) {
      uint64_t cost = 0;
      for (uint64_t prev : fronts) {
        uint64_t ov = (uint64_t)__builtin_popcountll(cand & prev);
        cost += ov * ov;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = cand;
      }
      // next popcount-equal mask (Gosper)
      uint64_t lo = cand & (~cand + 1);
      uint64_t carry = cand + lo;
      cand = carry | (((cand ^ carry) >> 2) / lo);
    }
    fronts.push_back(best);
  }

  Design d;
  d.ell = ell;
  d.k = k;
  std::vector<uint64_t> full;
  for (uint32_t i = 0; i < m; i++) {
    std::vector<uint8_t> s;
    for (uint32_t p = 0; p < ell; p++)
      if (fronts[i] >> p & 1) s.push_back((uint8_t)p);
    for (uint32_t p = 0; p < ell && s.size() < k; p++)
      if (!(fronts[i] >> p & 1)) s.push_back((uint8_t)p);
    uint64_t mask = 0;
    for (uint8_t p : s) mask |= 1ull << p;
    full.push_back(mask);
    d.sets.push_back(std::move(s));
  }
  uint32_t alpha = 0;
  for (uint32_t i = 0; i < m; i++)
    for (uint32_t j = i + 1; j < m; j++)
      alpha = std::max<uint32_t>(alpha, (uint32_t)__builtin_popcountll(full[i] & full[j]));
  d.alpha = alpha;
  d.verify();
  return d;
}

NWGenerator generator_from_config(const GeneratorConfig& cfg) {
  switch (cfg.kind) {
    case GeneratorConfig::Kind::kIdentity:
    case GeneratorConfig::Kind::kTable:
      return make_table_generator(cfg);
    case GeneratorConfig::Kind::kSurrogate: {
      NWGenerator g;
      g.design = spread_design(cfg.ell, cfg.k, cfg.m, std::max(core_width(cfg.k), 1u));
      g.hard_fn = surrogate_table(cfg.k);
      g.validate();
      return g;
    }
  }
  throw InternalError("generator config: unknown kind");
}

Bits pseudodet_prg(const PseudodetPrgConfig& cfg, uint32_t n, const Bits& seed, int advice) {
  uint32_t m = prg_seed_length(n, cfg.gamma_num, cfg.gamma_den);
  if (m > 64) throw BudgetError("pseudodet: output length beyond 64 bits");
  if (advice == 0) return Bits(0, (uint8_t)m);
  uint32_t ell = prg_seed_length(n, cfg.eps_num, cfg.eps_den);
  if (seed.size() != ell)
    throw ValidationError("pseudodet: seed must have length " + std::to_string(ell));
  GeneratorConfig gc;
  gc.kind = GeneratorConfig::Kind::kSurrogate;
  gc.ell = ell;
  gc.k = cfg.k;
  gc.m = m;
  gc.alpha = cfg.k;
  return nw_generate(generator_from_config(gc), seed);
}

int decide_Lk(const Bits& x, const TimeBoundTable& T, const HierarchyParams& hp,
              int advice, uint64_t budget, Sampler* sampler) {
  (void)T;
  hp.validate();
  if (advice == 0 || x.empty()) return 0;
  uint32_t r = core_width((uint32_t)x.size());
  Bits core = core_prefix(x, r);
  if (budget == 0 || r < 6) return surrogate_member(core);
  if (!sampler) throw ValidationError("decide: a positive budget requires a sampler");
  PermInstance inst = surrogate_matrix(core);
  OptimalResult res = optimal_search(inst, budget, *sampler, (uint32_t)manifest().checker_reps);
  if (res.found) return (int)((surrogate_code(res.value) >> inst.bit) & 1);
  return surrogate_member(core);
}

int lk_selfcorrect(const Bits& x, const std::function<int(const Bits&)>& oracle,
                   const TimeBoundTable& T, const HierarchyParams& hp,
                   uint32_t trials, Sampler& sampler) {
  GoodLength g = good_length((uint32_t)x.size(), T, hp);
  if (!g.good) return 0;
  if (g.r < 6) return 0;
  Bits core = core_prefix(x, g.r);
  PermInstance a = surrogate_matrix(core);
  uint32_t b = a.bit;
  uint32_t pad_len = (uint32_t)x.size() - g.r;
  uint64_t queries = 100ull * x.size();

  // Each matrix-value query is answered through 4 target-index membership
  // queries, each decided by majority over random-pad completions.
  PermOracle value_oracle = [&](const PermInstance& q) -> uint32_t {
    uint32_t u = 0;
    for (uint32_t tb = 0; tb < 4; tb++) {
      Bits c;
      c.push_back(tb & 1);
      c.push_back((tb >> 1) & 1);
      for (uint32_t e : q.a)
        for (uint32_t j = 0; j < 4; j++) c.push_back((e >> j) & 1);
      while (c.size() < g.r) c.push_back(0);
      uint64_t votes = 0;
      for (uint64_t i = 0; i < queries; i++) {
        Bits full = c;
        for (uint32_t p = 0; p < pad_len; p++) full.push_back(sampler.next_bit());
        votes += oracle(full) ? 1 : 0;
      }
      u |= (uint32_t)(2 * votes > queries ? 1 : 0) << tb;
    }
    int v = surrogate_decode(u);
    return v < 0 ? 0u : (uint32_t)v;
  };

  uint32_t val = perm_selfcorrect(a, value_oracle, trials, sampler);
  return (int)((surrogate_code(val) >> b) & 1);
}

OptimalResult optimal_search(const PermInstance& inst, uint64_t budget, Sampler& sampler,
                             uint32_t reps) {
  inst.validate();
  for (uint64_t s = 1; s <= budget; s++) {
    Program prog = machine_at(s);
    uint32_t steps = (uint32_t)std::min<uint64_t>(s, 256);
    // The s-th program, run on the query's wire form with an all-zeros
    // random tape, answers one decision bit per target index; four queries
    // assemble a field value.
    PermOracle mach = [&](const PermInstance& q) -> uint32_t {
      uint32_t u = 0;
      for (uint32_t tb = 0; tb < 4; tb++) {
        PermInstance w = q;
        w.bit = tb;
        RunResult rr = exec_program_fn(prog, w.wire(), steps, [](size_t) { return 0; });
        u |= (uint32_t)(accepts(rr) ? 1 : 0) << tb;
      }
      return u % q.p;
    };
    uint32_t claimed = mach(inst);
    if (perm_check(inst, claimed, mach, sampler, reps) == CheckVerdict::kAccept)
      return {true, (int)((claimed >> inst.bit) & 1), claimed, s};
  }
  return {false, -1, 0, budget};
}

TimeBoundTable estimate_T(uint32_t max_n, uint32_t runs, Sampler& sampler) {
  if (max_n == 0 || runs == 0) throw ValidationError("estimate: need max_n >= 1 and runs >= 1");
  constexpr uint64_t kStageCap = 1 << 17;  // past every stage observed at this scale
  std::map<uint32_t, uint64_t> first_stage;  // 1x1 value -> answering stage
  auto stage_for = [&](uint32_t v) -> uint64_t {
    auto it = first_stage.find(v);
    if (it != first_stage.end()) return it->second;
    PermInstance inst = PermInstance::make(13, 1, {v}, 0);
    OptimalResult res = optimal_search(inst, kStageCap, sampler, 1);
    uint64_t stage = res.found ? res.stage : kStageCap;
    first_stage.emplace(v, stage);
    return stage;
  };

  TimeBoundTable t;
  t.source = TimeBoundTable::Source::kEmpirical;
  t.values.assign((size_t)max_n + 1, 1);
  for (uint32_t n = 1; n <= max_n; n++) {
    std::vector<uint64_t> stages;
    stages.reserve(runs);
    for (uint32_t i = 0; i < runs; i++) stages.push_back(stage_for((uint32_t)sampler.next_below(13)));
    std::sort(stages.begin(), stages.end());
    // smallest stage answering a 1 - 1/(n+1) fraction of the sample
    uint64_t need = ((uint64_t)runs * n + n) / (n + 1);
    if (need == 0) need = 1;
    uint64_t t_n = stages[(size_t)need - 1];
    t.values[n] = std::max(t.values[n - 1], t_n);
  }
  t.validate();
  return t;
}

}  // namespace pdlab
