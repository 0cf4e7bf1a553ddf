#include "pdlab/nw.hpp"

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "pdlab/errors.hpp"

namespace pdlab {

namespace {

// Augmenting-path step of the bipartite matching that assigns each set a
// distinct representative element.
bool claim_rep(size_t i, const std::vector<std::vector<uint8_t>>& sets,
               std::vector<char>& visited, std::vector<int>& owner) {
  for (uint8_t e : sets[i]) {
    if (visited[e]) continue;
    visited[e] = 1;
    if (owner[e] < 0 || claim_rep((size_t)owner[e], sets, visited, owner)) {
      owner[e] = (int)i;
      return true;
    }
  }
  return false;
}

std::vector<uint8_t> accept_table(const Circuit& d) {
  std::vector<uint8_t> t(1ull << d.input_arity);
  for (uint64_t w = 0; w < t.size(); w++) t[w] = d.eval_packed(w) ? 1 : 0;
  return t;
}

void check_enumeration_budget(const Circuit& d, const NWGenerator& g) {
  g.validate();
  if (g.seed_length() > 20) throw BudgetError("nw: seed length above enumeration cap 20");
  if (g.output_length() > 20) throw BudgetError("nw: output length above enumeration cap 20");
  if (d.input_arity > g.output_length())
    throw ValidationError("nw: distinguisher arity exceeds generator output length");
}

}  // namespace

void Design::verify() const {
  if (ell == 0 || ell > 64) throw ValidationError("design: ell must be in [1,64]");
  if (k == 0 || k > ell) throw ValidationError("design: k must be in [1,ell]");
  std::vector<uint64_t> masks;
  for (size_t i = 0; i < sets.size(); i++) {
    const auto& s = sets[i];
    if (s.size() != k)
      throw ValidationError("design: set " + std::to_string(i) + " has wrong size");
    uint64_t m = 0;
    for (uint8_t e : s) {
      if (e >= ell)
        throw ValidationError("design: set " + std::to_string(i) + " has element out of range");
      if (m & (1ull << e))
        throw ValidationError("design: set " + std::to_string(i) + " has a duplicate element");
      m |= 1ull << e;
    }
    for (size_t j = 0; j < i; j++)
      if ((uint32_t)__builtin_popcountll(m & masks[j]) > alpha)
        throw ValidationError("design: sets " + std::to_string(j) + " and " +
                              std::to_string(i) + " intersect in more than alpha elements");
    masks.push_back(m);
  }
}

Design build_design(uint32_t ell, uint32_t k, uint32_t m, uint32_t alpha) {
  if (ell == 0 || ell > 64) throw ValidationError("design: ell must be in [1,64]");
  if (k == 0 || k > ell) throw ValidationError("design: k must be in [1,ell]");
  if (m == 0 || m > 64) throw ValidationError("design: m must be in [1,64]");

  // Greedy over candidate masks in ascending value order (Gosper's hack).
  std::vector<uint64_t> chosen;
  uint64_t cand = (1ull << k) - 1;
  uint64_t limit = ell == 64 ? ~0ull : (1ull << ell);
  while (chosen.size() < m) {
    if (cand >= limit || cand == 0)
      throw ValidationError("design: no admissible set for index " +
                            std::to_string(chosen.size()) + " (ell=" + std::to_string(ell) +
                            ", k=" + std::to_string(k) + ", alpha=" + std::to_string(alpha) + ")");
    bool ok = true;
    for (uint64_t prev : chosen)
      if ((uint32_t)__builtin_popcountll(cand & prev) > alpha) {
        ok = false;
        break;
      }
    if (ok) chosen.push_back(cand);
    uint64_t lo = cand & (~cand + 1);
    uint64_t carry = cand + lo;
    cand = carry | (((cand ^ carry) >> 2) / lo);
  }

  std::vector<std::vector<uint8_t>> sets;
  for (uint64_t mask : chosen) {
    std::vector<uint8_t> s;
    for (uint8_t e = 0; e < ell; e++)
      if (mask & (1ull << e)) s.push_back(e);
    sets.push_back(std::move(s));
  }

  Design d{ell, k, alpha, std::move(sets)};
  d.verify();
  return d;
}

Design with_distinct_reps(Design d) {
  d.verify();
  std::vector<int> owner(d.ell, -1);
  for (size_t i = 0; i < d.sets.size(); i++) {
    std::vector<char> visited(d.ell, 0);
    if (!claim_rep(i, d.sets, visited, owner))
      throw ValidationError("design: no distinct representative for set " + std::to_string(i));
  }
  std::vector<uint8_t> rep(d.sets.size(), 0);
  for (uint32_t e = 0; e < d.ell; e++)
    if (owner[e] >= 0) rep[(size_t)owner[e]] = (uint8_t)e;
  for (size_t i = 0; i < d.sets.size(); i++) {
    auto& s = d.sets[i];
    std::sort(s.begin(), s.end());
    s.erase(std::find(s.begin(), s.end(), rep[i]));
    s.insert(s.begin(), rep[i]);
  }
  d.verify();
  return d;
}

void NWGenerator::validate() const {
  design.verify();
  if (design.k > 20) throw BudgetError("nw: hard function arity above table cap 20");
  if (hard_fn.size() != (1ull << design.k))
    throw ValidationError("nw: hard function table size is not 2^k");
  for (uint8_t v : hard_fn)
    if (v > 1) throw ValidationError("nw: hard function table entries must be bits");
  if (design.m() > 64) throw ValidationError("nw: output length above 64");
}

NWGenerator make_identity_generator(uint32_t len) {
  if (len == 0 || len > 64) throw ValidationError("nw: identity length must be in [1,64]");
  Design d;
  d.ell = len;
  d.k = 1;
  d.alpha = 0;
  for (uint32_t i = 0; i < len; i++) d.sets.push_back({(uint8_t)i});
  NWGenerator g{std::move(d), {0, 1}};
  g.validate();
  return g;
}

Bits nw_generate(const NWGenerator& g, const Bits& seed) {
  if (seed.size() != g.seed_length())
    throw ValidationError("nw: seed length does not match the design");
  Bits out;
  for (const auto& s : g.design.sets) {
    uint64_t idx = 0;
    for (size_t j = 0; j < s.size(); j++) idx |= (uint64_t)seed.get(s[j]) << j;
    out.push_back(g.hard_fn[idx] != 0);
  }
  return out;
}

const char* estimate_mode_name(EstimateMode m) {
  switch (m) {
    case EstimateMode::kExact: return "exact";
    case EstimateMode::kSampled: return "sampled";
    case EstimateMode::kPrg: return "prg";
  }
  return "?";
}

DistinguisherReport advantage_exact(const Circuit& d, const NWGenerator& g,
                                    uint32_t delta_num, uint32_t delta_den) {
  check_enumeration_budget(d, g);
  d.validate();
  uint32_t m = g.output_length();
  auto table = accept_table(d);
  uint64_t amask = table.size() - 1;

  // Unwired high slots multiply the accepting count uniformly.
  uint64_t ones = 0;
  for (uint8_t v : table) ones += v;
  uint64_t count_u = ones << (m - d.input_arity);

  uint64_t count_g = 0;
  uint32_t ell = g.seed_length();
  for (uint64_t z = 0; z < (1ull << ell); z++) {
    Bits y = nw_generate(g, Bits(z, (uint8_t)ell));
    count_g += table[y.w & amask];
  }

  DistinguisherReport r;
  r.p_uniform = Dyadic::ratio(count_u, (int)m);
  r.p_generator = Dyadic::ratio(count_g, (int)ell);
  r.advantage = abs_diff(r.p_uniform, r.p_generator);
  r.mode = EstimateMode::kExact;
  r.delta_num = delta_num;
  r.delta_den = delta_den;
  r.distinguishes = r.advantage.geq_fraction(delta_num, delta_den);
  return r;
}

DistinguisherReport advantage_sample(const Circuit& d, const NWGenerator& g,
                                     uint64_t samples, Sampler& sampler,
                                     uint32_t delta_num, uint32_t delta_den) {
  g.validate();
  d.validate();
  if (samples == 0) throw ValidationError("nw: sample count must be positive");
  uint32_t m = g.output_length();
  if (d.input_arity > m)
    throw ValidationError("nw: distinguisher arity exceeds generator output length");
  uint64_t s2 = pow2_ceil(samples);
  int lg = pow2_log(s2);

  uint64_t count_u = 0, count_g = 0;
  for (uint64_t i = 0; i < s2; i++) {
    Bits y = sampler.next_bits((uint8_t)m);
    count_u += d.eval_packed(y.w) ? 1 : 0;
  }
  for (uint64_t i = 0; i < s2; i++) {
    Bits z = sampler.next_bits((uint8_t)g.seed_length());
    Bits y = nw_generate(g, z);
    count_g += d.eval_packed(y.w) ? 1 : 0;
  }

  DistinguisherReport r;
  r.p_uniform = Dyadic::ratio(count_u, lg);
  r.p_generator = Dyadic::ratio(count_g, lg);
  r.advantage = abs_diff(r.p_uniform, r.p_generator);
  r.mode = EstimateMode::kSampled;
  r.samples = s2;
  r.delta_num = delta_num;
  r.delta_den = delta_den;
  r.distinguishes = r.advantage.geq_fraction(delta_num, delta_den);
  return r;
}

HybridReport hybrid_predictor(const Circuit& d, const NWGenerator& g) {
  check_enumeration_budget(d, g);
  d.validate();
  uint32_t m = g.output_length();
  uint32_t ell = g.seed_length();
  auto table = accept_table(d);
  uint64_t amask = table.size() - 1;

  std::vector<uint32_t> outs(1ull << ell);
  for (uint64_t z = 0; z < outs.size(); z++)
    outs[z] = (uint32_t)nw_generate(g, Bits(z, (uint8_t)ell)).w;

  // Hybrid i: first i output bits pseudorandom, the rest uniform. Group
  // seeds by output prefix so the uniform tail is enumerated once per
  // distinct prefix.
  HybridReport rep;
  rep.hybrid.resize(m + 1);
  for (uint32_t i = 0; i <= m; i++) {
    std::vector<uint32_t> cnt(1ull << i, 0);
    uint64_t pmask = (1ull << i) - 1;
    for (uint32_t y : outs) cnt[y & pmask]++;
    uint64_t num = 0;
    for (uint64_t p = 0; p < cnt.size(); p++) {
      if (!cnt[p]) continue;
      uint64_t acc = 0;
      for (uint64_t u = 0; u < (1ull << (m - i)); u++) acc += table[(p | (u << i)) & amask];
      num += cnt[p] * acc;
    }
    rep.hybrid[i] = Dyadic::ratio(num, (int)(ell + m - i));
  }

  rep.total = abs_diff(rep.hybrid[m], rep.hybrid[0]);
  rep.found = !rep.total.is_zero();
  if (!rep.found) {
    rep.success = Dyadic(1, 1);
    rep.advantage = Dyadic::zero();
    return rep;
  }

  // Widest gap wins; ties go to the lowest bit so the report is canonical.
  uint32_t b = 0;
  Dyadic best = Dyadic::zero();
  bool positive = false;
  for (uint32_t i = 0; i < m; i++) {
    Dyadic gap = abs_diff(rep.hybrid[i + 1], rep.hybrid[i]);
    if (best < gap) {
      best = gap;
      b = i;
      positive = rep.hybrid[i] < rep.hybrid[i + 1];
    }
  }
  rep.bit = b;

  // Guess-carrier construction: accept -> keep the fresh bit, reject -> flip
  // it (flipped the other way round when the gap is negative).
  CircuitBuilder bld(m);
  std::vector<uint32_t> map(d.gates.size());
  for (size_t gi = 0; gi < d.gates.size(); gi++) {
    const auto& node = d.gates[gi];
    switch (node.kind) {
      case Gate::kInput: map[gi] = bld.input(node.a); break;
      case Gate::kConst0: map[gi] = bld.constant(false); break;
      case Gate::kConst1: map[gi] = bld.constant(true); break;
      case Gate::kNot: map[gi] = bld.gate_not(map[node.a]); break;
      case Gate::kAnd2: map[gi] = bld.gate_and(map[node.a], map[node.b]); break;
      case Gate::kOr2: map[gi] = bld.gate_or(map[node.a], map[node.b]); break;
      case Gate::kXor2: map[gi] = bld.gate_xor(map[node.a], map[node.b]); break;
    }
  }
  uint32_t carrier = bld.input(b);
  uint32_t x = bld.gate_xor(d.gates.empty() ? bld.constant(false) : map[d.output], carrier);
  rep.predictor = bld.take(positive ? bld.gate_not(x) : x);

  // Exact success probability, measured by running the built circuit: group
  // seeds by (prefix, target bit) and enumerate the fresh tail.
  uint64_t kmask = (1ull << (b + 1)) - 1;
  std::vector<uint32_t> cnt(1ull << (b + 1), 0);
  for (uint32_t y : outs) cnt[y & kmask]++;
  uint64_t num = 0;
  for (uint64_t key = 0; key < cnt.size(); key++) {
    if (!cnt[key]) continue;
    uint64_t prefix = key & ((1ull << b) - 1);
    int target = (int)((key >> b) & 1);
    uint64_t match = 0;
    for (uint64_t u = 0; u < (1ull << (m - b)); u++) {
      uint64_t w = prefix | (u << b);
      match += rep.predictor.eval_packed(w) == (target != 0) ? 1 : 0;
    }
    num += cnt[key] * match;
  }
  rep.success = Dyadic::ratio(num, (int)(ell + m - b));
  rep.advantage = abs_diff(rep.success, Dyadic(1, 1));
  return rep;
}

GeneratorConfig GeneratorConfig::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("generator config: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("hard_fn") || !j["hard_fn"].is_string())
    throw ValidationError("generator config: missing hard_fn string");
  auto u32 = [&](const char* key) -> uint32_t {
    if (!j.contains(key) || !j[key].is_number_unsigned())
      throw ValidationError(std::string("generator config: missing field ") + key);
    return j[key].get<uint32_t>();
  };

  GeneratorConfig cfg;
  std::string hf = j["hard_fn"].get<std::string>();
  if (hf == "identity") {
    cfg.kind = Kind::kIdentity;
    cfg.ell = u32("ell");
    cfg.k = 1;
    cfg.m = cfg.ell;
    cfg.alpha = 0;
    return cfg;
  }
  cfg.ell = u32("ell");
  cfg.k = u32("k");
  cfg.m = u32("m");
  cfg.alpha = u32("alpha");
  if (hf == "surrogate") {
    cfg.kind = Kind::kSurrogate;
    return cfg;
  }
  cfg.kind = Kind::kTable;
  if (cfg.k > 20 || hf.size() * 4 != (1ull << cfg.k))
    throw ValidationError("generator config: hex table length does not match 2^k bits");
  for (size_t i = 0; i < hf.size(); i++) {
    char c = hf[i];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ValidationError("generator config: hard_fn is not a hex string");
    for (int b = 3; b >= 0; b--) cfg.table.push_back((uint8_t)((v >> b) & 1));
  }
  return cfg;
}

std::string GeneratorConfig::to_json() const {
  nlohmann::json j;
  switch (kind) {
    case Kind::kIdentity:
      j["hard_fn"] = "identity";
      j["ell"] = ell;
      break;
    case Kind::kSurrogate:
      j["hard_fn"] = "surrogate";
      j["ell"] = ell;
      j["k"] = k;
      j["m"] = m;
      j["alpha"] = alpha;
      break;
    case Kind::kTable: {
      std::string hex;
      for (size_t i = 0; i < table.size(); i += 4) {
        int v = 0;
        for (int b = 0; b < 4; b++) v = (v << 1) | table[i + b];
        hex += "0123456789abcdef"[v];
      }
      j["hard_fn"] = hex;
      j["ell"] = ell;
      j["k"] = k;
      j["m"] = m;
      j["alpha"] = alpha;
      break;
    }
  }
  return j.dump();
}

NWGenerator make_table_generator(const GeneratorConfig& cfg) {
  switch (cfg.kind) {
    case GeneratorConfig::Kind::kIdentity:
      return make_identity_generator(cfg.ell);
    case GeneratorConfig::Kind::kTable: {
      NWGenerator g{build_design(cfg.ell, cfg.k, cfg.m, cfg.alpha), cfg.table};
      g.validate();
      return g;
    }
    case GeneratorConfig::Kind::kSurrogate:
      throw ValidationError(
          "generator config: surrogate tables are materialized by generator_from_config");
  }
  throw InternalError("generator config: unknown kind");
}

uint32_t prg_seed_length(uint32_t n, uint32_t eps_num, uint32_t eps_den) {
  if (n == 0 || eps_num == 0 || eps_den == 0 || eps_num > eps_den)
    throw ValidationError("prg: exponent must satisfy 0 < eps <= 1 and n > 0");
  // ceil(n^(num/den)) = least s with s^den >= n^num, in exact arithmetic.
  auto pow_capped = [](uint32_t base, uint32_t exp) -> unsigned __int128 {
    unsigned __int128 cap = (unsigned __int128)1 << 100;
    unsigned __int128 v = 1;
    for (uint32_t i = 0; i < exp; i++) {
      v *= base;
      if (v > cap) throw BudgetError("prg: exponent overflow in seed length");
    }
    return v;
  };
  unsigned __int128 target = pow_capped(n, eps_num);
  for (uint32_t s = 1; s <= 1u << 20; s++)
    if (pow_capped(s, eps_den) >= target) return s;
  throw BudgetError("prg: seed length above cap");
}

}  // namespace pdlab
