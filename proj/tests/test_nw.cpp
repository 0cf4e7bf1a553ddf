#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "pdlab/errors.hpp"
#include "pdlab/nw.hpp"

using namespace pdlab;

namespace {

// Sum-of-minterms circuit for an arbitrary truth table on `arity` bits;
// table bit w = value on packed input w.
Circuit circuit_from_table(uint32_t arity, uint32_t table) {
  CircuitBuilder bld(arity);
  int acc = -1;
  for (uint32_t w = 0; w < (1u << arity); w++) {
    if (!((table >> w) & 1)) continue;
    int term = -1;
    for (uint32_t j = 0; j < arity; j++) {
      uint32_t lit = bld.input(j);
      if (!((w >> j) & 1)) lit = bld.gate_not(lit);
      term = term < 0 ? (int)lit : (int)bld.gate_and((uint32_t)term, lit);
    }
    acc = acc < 0 ? term : (int)bld.gate_or((uint32_t)acc, (uint32_t)term);
  }
  if (acc < 0) acc = (int)bld.constant(false);
  return bld.take((uint32_t)acc);
}

Circuit first_bit_circuit() {
  CircuitBuilder bld(1);
  return bld.take(bld.input(0));
}

// f(a,b) = a AND b on each pair; disjoint pairs make output bits independent
// Bernoulli(1/4).
NWGenerator and_pair_generator() {
  NWGenerator g{build_design(6, 2, 3, 0), {0, 0, 0, 1}};
  g.validate();
  return g;
}

// XOR over disjoint pairs: output exactly uniform on 3 bits.
NWGenerator xor_pair_generator() {
  NWGenerator g{build_design(6, 2, 3, 0), {0, 1, 1, 0}};
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("design construction satisfies every invariant") {
  Design d = build_design(16, 4, 8, 2);
  CHECK(d.m() == 8);
  CHECK_NOTHROW(d.verify());

  // Independent recheck, not via verify().
  for (size_t i = 0; i < d.sets.size(); i++) {
    CHECK(d.sets[i].size() == 4);
    std::set<uint8_t> si(d.sets[i].begin(), d.sets[i].end());
    CHECK(si.size() == 4);
    for (uint8_t e : si) CHECK(e < 16);
    for (size_t j = 0; j < i; j++) {
      std::set<uint8_t> sj(d.sets[j].begin(), d.sets[j].end());
      size_t common = 0;
      for (uint8_t e : si) common += sj.count(e);
      CHECK(common <= 2);
    }
  }

  // Representative reordering keeps the same sets but makes the leading
  // elements pairwise distinct.
  Design r = with_distinct_reps(d);
  std::set<uint8_t> firsts;
  for (size_t i = 0; i < r.sets.size(); i++) {
    firsts.insert(r.sets[i][0]);
    std::set<uint8_t> a(d.sets[i].begin(), d.sets[i].end());
    std::set<uint8_t> b(r.sets[i].begin(), r.sets[i].end());
    CHECK(a == b);
  }
  CHECK(firsts.size() == 8);

  // Degenerate shapes.
  Design single = build_design(4, 4, 1, 0);
  CHECK(single.sets.size() == 1);
  CHECK(single.sets[0] == std::vector<uint8_t>{0, 1, 2, 3});
  CHECK(build_design(6, 3, 10, 3).m() == 10);  // alpha = k admits everything

  // Only two disjoint pairs fit in [4]; the error names the stuck index.
  try {
    build_design(4, 2, 20, 0);
    CHECK(false);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("index 2") != std::string::npos);
  }
}

TEST_CASE("design verification rejects tampered data") {
  Design d = build_design(16, 4, 8, 2);
  Design bad = d;
  bad.sets[3][1] = bad.sets[3][0];  // duplicate element
  CHECK_THROWS_AS(bad.verify(), ValidationError);
  bad = d;
  bad.sets[5] = bad.sets[4];  // identical sets: intersection k > alpha
  CHECK_THROWS_AS(bad.verify(), ValidationError);

  // Representative assignment resolves collisions by matching, and reports
  // genuinely unmatchable systems.
  Design reps;
  reps.ell = 4;
  reps.k = 2;
  reps.alpha = 2;
  reps.sets = {{0, 1}, {0, 2}};
  Design fixed = with_distinct_reps(reps);
  CHECK(fixed.sets[0][0] != fixed.sets[1][0]);
  reps.sets = {{0, 1}, {0, 1}, {0, 1}};  // three sets over two elements
  CHECK_THROWS_AS(with_distinct_reps(reps), ValidationError);
}

TEST_CASE("identity generator copies the seed") {
  NWGenerator g = make_identity_generator(8);
  for (uint32_t w = 0; w < 256; w++) {
    Bits seed((uint64_t)w, 8);
    CHECK(nw_generate(g, seed) == seed);
  }
  CHECK_THROWS_AS(nw_generate(g, Bits(0, 7)), ValidationError);
}

TEST_CASE("generation matches hand evaluation on an explicit design") {
  Design d;
  d.ell = 4;
  d.k = 2;
  d.alpha = 0;
  d.sets = {{0, 1}, {2, 3}};
  NWGenerator g{d, {0, 1, 1, 0}};  // XOR of the two selected seed bits
  g.validate();
  CHECK(nw_generate(g, Bits::parse("1010")) == Bits::parse("11"));
  CHECK(nw_generate(g, Bits::parse("1110")) == Bits::parse("01"));
  CHECK(nw_generate(g, Bits::parse("0000")) == Bits::parse("00"));
  CHECK(nw_generate(g, Bits::parse("0111")) == Bits::parse("10"));
}

TEST_CASE("exact advantage: frozen endpoints") {
  NWGenerator big{build_design(16, 4, 8, 2),
                  std::vector<uint8_t>(16, 1)};  // constant-1 hard function
  big.validate();

  // Constant distinguisher sees nothing.
  CircuitBuilder cb(1);
  Circuit czero = cb.take(cb.constant(false));
  DistinguisherReport r0 = advantage_exact(czero, big);
  CHECK(r0.advantage.is_zero());
  CHECK_FALSE(r0.distinguishes);

  // First output bit vs the all-ones generator: 1 vs 1/2.
  DistinguisherReport r1 = advantage_exact(first_bit_circuit(), big);
  CHECK(r1.p_generator == Dyadic::one());
  CHECK(r1.p_uniform == Dyadic(1, 1));
  CHECK(r1.advantage == Dyadic(1, 1));
  CHECK(r1.distinguishes);
  CHECK(r1.mode == EstimateMode::kExact);

  // Budget gates.
  NWGenerator wide = make_identity_generator(21);
  CHECK_THROWS_AS(advantage_exact(first_bit_circuit(), wide), BudgetError);
  Circuit fat = circuit_from_table(4, 0x8000);
  CHECK_THROWS_AS(advantage_exact(fat, make_identity_generator(3)), ValidationError);
}

TEST_CASE("exact advantage sweep over all 3-bit distinguishers") {
  NWGenerator andg = and_pair_generator();
  NWGenerator xorg = xor_pair_generator();

  // Raw-arithmetic oracle: generator output counts over all 64 seeds.
  auto out_counts = [](const NWGenerator& g) {
    std::vector<uint64_t> c(8, 0);
    for (uint64_t z = 0; z < 64; z++) c[nw_generate(g, Bits(z, 6)).w]++;
    return c;
  };
  std::vector<uint64_t> ca = out_counts(andg), cx = out_counts(xorg);

  // XOR over disjoint pairs is exactly uniform, so nothing distinguishes it.
  for (int y = 0; y < 8; y++) CHECK(cx[y] == 8);

  Dyadic max_adv;
  for (uint32_t f = 0; f < 256; f++) {
    Circuit d = circuit_from_table(3, f);
    DistinguisherReport ra = advantage_exact(d, andg);
    DistinguisherReport rx = advantage_exact(d, xorg);
    CHECK(rx.advantage.is_zero());

    uint64_t hits_u = 0, hits_g = 0;
    for (int y = 0; y < 8; y++)
      if ((f >> y) & 1) {
        hits_u += 8;  // 8 = 64/8 uniform mass per outcome
        hits_g += ca[y];
      }
    CHECK(ra.p_uniform == Dyadic::ratio(hits_u, 6));
    CHECK(ra.p_generator == Dyadic::ratio(hits_g, 6));
    if (max_adv < ra.advantage) max_adv = ra.advantage;
  }
  // Best distinguisher achieves the total variation distance between the
  // Bernoulli(1/4)^3 product measure and uniform: 11/32.
  CHECK(max_adv == Dyadic(11, 5));
}

TEST_CASE("sampled advantage mirrors exact on 20 instances") {
  NWGenerator andg = and_pair_generator();
  for (uint32_t f = 1; f <= 20; f++) {
    Circuit d = circuit_from_table(3, f);
    DistinguisherReport ex = advantage_exact(d, andg);
    Sampler s("nw-advantage", f, 7);
    DistinguisherReport sm = advantage_sample(d, andg, 100000, s);
    CHECK(sm.mode == EstimateMode::kSampled);
    CHECK(sm.samples == (1ull << 17));
    CHECK(abs_diff(sm.advantage, ex.advantage).leq_fraction(1, 50));
  }
  Sampler s("nw-advantage", 0, 7);
  CHECK_THROWS_AS(advantage_sample(first_bit_circuit(), andg, 0, s), ValidationError);
}

TEST_CASE("hybrid decomposition telescopes exactly") {
  NWGenerator andg = and_pair_generator();
  struct Case {
    Circuit d;
    uint32_t bit;
    Dyadic advantage;
    Dyadic success;
  };
  std::vector<Case> cases;
  // First bit: gap 1/4 at position 0, predictor always guesses 0.
  cases.push_back({first_bit_circuit(), 0, Dyadic(1, 2), Dyadic(3, 2)});
  // Parity of all three bits: only the last hybrid step moves, by 1/16.
  cases.push_back({circuit_from_table(3, 0x96), 2, Dyadic(1, 4), Dyadic(9, 4)});

  for (const auto& c : cases) {
    HybridReport h = hybrid_predictor(c.d, andg);
    DistinguisherReport ex = advantage_exact(c.d, andg);
    REQUIRE(h.found);
    CHECK(h.bit == c.bit);
    CHECK(h.advantage == c.advantage);
    CHECK(h.success == c.success);

    // Endpoints are the two sides of the exact advantage.
    REQUIRE(h.hybrid.size() == 4);
    CHECK(h.hybrid[0] == ex.p_uniform);
    CHECK(h.hybrid[3] == ex.p_generator);
    CHECK(h.total == ex.advantage);

    // Signed gaps telescope: P_0 + (positive gaps) = P_m + (negative gaps).
    Dyadic pos, neg;
    Dyadic widest;
    for (size_t i = 0; i + 1 < h.hybrid.size(); i++) {
      Dyadic gap = abs_diff(h.hybrid[i + 1], h.hybrid[i]);
      if (h.hybrid[i] < h.hybrid[i + 1]) pos = pos + gap;
      else neg = neg + gap;
      if (widest < gap) widest = gap;
    }
    CHECK(h.hybrid[0] + pos == h.hybrid[3] + neg);
    CHECK(h.advantage == widest);

    // Averaging bound: the widest gap carries at least total/m.
    Dyadic scaled(h.advantage.num * 3, h.advantage.e);
    CHECK(h.total <= scaled);

    // Replay the predictor against the raw definition: fresh tail u, guess
    // carrier at slot `bit`, target = the generator's next bit.
    uint64_t match = 0, runs = 0;
    for (uint64_t z = 0; z < 64; z++) {
      Bits y = nw_generate(andg, Bits(z, 6));
      for (uint64_t u = 0; u < (1ull << (3 - h.bit)); u++) {
        uint64_t w = (y.w & ((1ull << h.bit) - 1)) | (u << h.bit);
        match += h.predictor.eval_packed(w) == (y.get(h.bit) != 0) ? 1 : 0;
        runs++;
      }
    }
    CHECK(h.success == Dyadic::ratio(match, pow2_log(runs)));
  }
}

TEST_CASE("hybrid predictor on the all-ones generator") {
  NWGenerator big{build_design(16, 4, 8, 2), std::vector<uint8_t>(16, 1)};
  big.validate();
  HybridReport h = hybrid_predictor(first_bit_circuit(), big);
  REQUIRE(h.found);
  CHECK(h.bit == 0);
  CHECK(h.total == Dyadic(1, 1));
  CHECK(h.advantage == Dyadic(1, 1));
  CHECK(h.success == Dyadic::one());  // bit 0 is always 1 and always guessed
  REQUIRE(h.hybrid.size() == 9);
  CHECK(h.hybrid[0] == Dyadic(1, 1));
  for (size_t i = 1; i <= 8; i++) CHECK(h.hybrid[i] == Dyadic::one());
}

TEST_CASE("no predictor exists against a uniform generator") {
  NWGenerator xorg = xor_pair_generator();
  HybridReport h = hybrid_predictor(circuit_from_table(3, 0x96), xorg);
  CHECK_FALSE(h.found);
  CHECK(h.total.is_zero());
  CHECK(h.advantage.is_zero());

  CircuitBuilder cb(1);
  HybridReport hc = hybrid_predictor(cb.take(cb.constant(true)), and_pair_generator());
  CHECK_FALSE(hc.found);
}

TEST_CASE("generator config round trip") {
  GeneratorConfig id = GeneratorConfig::parse(R"({"hard_fn":"identity","ell":8})");
  CHECK(id.kind == GeneratorConfig::Kind::kIdentity);
  NWGenerator g = make_table_generator(id);
  CHECK(nw_generate(g, Bits::parse("10110010")) == Bits::parse("10110010"));

  GeneratorConfig tb =
      GeneratorConfig::parse(R"({"ell":6,"k":2,"m":3,"alpha":0,"hard_fn":"8"})");
  CHECK(tb.kind == GeneratorConfig::Kind::kTable);
  CHECK(tb.table == std::vector<uint8_t>{1, 0, 0, 0});
  NWGenerator ng = make_table_generator(tb);
  // 1000: accepts only index 0, i.e. both selected seed bits zero.
  CHECK(nw_generate(ng, Bits::parse("000000")) == Bits::parse("111"));
  CHECK(nw_generate(ng, Bits::parse("100000")) == Bits::parse("011"));

  GeneratorConfig back = GeneratorConfig::parse(tb.to_json());
  CHECK(back.kind == tb.kind);
  CHECK(back.ell == tb.ell);
  CHECK(back.k == tb.k);
  CHECK(back.m == tb.m);
  CHECK(back.alpha == tb.alpha);
  CHECK(back.table == tb.table);

  GeneratorConfig sg =
      GeneratorConfig::parse(R"({"ell":16,"k":5,"m":8,"alpha":2,"hard_fn":"surrogate"})");
  CHECK(sg.kind == GeneratorConfig::Kind::kSurrogate);
  CHECK_THROWS_AS(make_table_generator(sg), ValidationError);
  CHECK(GeneratorConfig::parse(sg.to_json()).kind == GeneratorConfig::Kind::kSurrogate);

  CHECK_THROWS_AS(GeneratorConfig::parse("{"), ValidationError);
  CHECK_THROWS_AS(GeneratorConfig::parse(R"({"ell":6})"), ValidationError);
  CHECK_THROWS_AS(
      GeneratorConfig::parse(R"({"ell":6,"k":2,"m":3,"alpha":0,"hard_fn":"88"})"),
      ValidationError);
  CHECK_THROWS_AS(
      GeneratorConfig::parse(R"({"ell":6,"k":2,"m":3,"alpha":0,"hard_fn":"zz"})"),
      ValidationError);
}

TEST_CASE("seed length recipe is exact") {
  CHECK(prg_seed_length(32, 4, 5) == 16);  // 16^5 = 32^4 exactly
  CHECK(prg_seed_length(2, 1, 2) == 2);
  CHECK(prg_seed_length(16, 1, 2) == 4);
  CHECK(prg_seed_length(17, 1, 2) == 5);
  CHECK(prg_seed_length(9, 1, 2) == 3);
  CHECK(prg_seed_length(8, 2, 3) == 4);
  CHECK(prg_seed_length(7, 1, 1) == 7);
  CHECK_THROWS_AS(prg_seed_length(8, 3, 2), ValidationError);
  CHECK_THROWS_AS(prg_seed_length(0, 1, 2), ValidationError);
}
