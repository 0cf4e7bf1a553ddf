#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdlab/distribution.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/kolmogorov.hpp"

using namespace pdlab;

namespace {
Bits zeros(uint8_t n) { return from_msb_value(0, n); }
}  // namespace

TEST_CASE("budget validation") {
  ComplexityBudget b;
  CHECK_NOTHROW(b.validate());
  ComplexityBudget bad = b;
  bad.delta_num = 1;
  bad.delta_den = 2;  // needs > 1/2
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = b;
  bad.max_program_bits = 32;
  CHECK_THROWS_AS(bad.validate(), BudgetError);
  bad = b;
  bad.max_log_t = 6;
  CHECK_THROWS_AS(bad.validate(), BudgetError);
  CHECK_THROWS_AS(measure_kt(Bits(), b), ValidationError);
  CHECK(literal_print_bound(1) == 17);
  CHECK(literal_print_bound(4) == 43);
}

TEST_CASE("deterministic printer cost: frozen small values") {
  ComplexityBudget b;
  // Single bits: one OUT instruction, one step, no log term.
  ComplexityReport r0 = measure_kt(Bits::parse("0"), b);
  CHECK(r0.found);
  CHECK(r0.value == 8);
  CHECK(r0.machine.hex() == "60");
  CHECK(r0.aux.empty());
  CHECK(r0.t == 1);
  ComplexityReport r1 = measure_kt(Bits::parse("1"), b);
  CHECK(r1.value == 8);
  CHECK(r1.machine.hex() == "40");

  // Alternating four bits: emit-emit-loop, fourth bit lands at step 5.
  ComplexityReport ra = measure_kt(Bits::parse("0101"), b);
  CHECK(ra.found);
  CHECK(ra.value == 27);  // 24 + ceil(log 5)
  CHECK(ra.machine.hex() == "6040a0");
  CHECK(ra.t == 5);
  CHECK(ra.value <= literal_print_bound(4));

  // Aperiodic eight bits: no three-instruction printer exists.
  ComplexityReport rn = measure_kt(Bits::parse("01011010"), b);
  CHECK_FALSE(rn.found);
  CHECK(rn.value == kNoWitness);
  CHECK(rn.exhausted);
}

TEST_CASE("probabilistic printer cost: frozen small values") {
  ComplexityBudget b;
  CHECK(measure_rkt(Bits::parse("0"), b).value == 8);
  CHECK(measure_rkt(Bits::parse("1"), b).value == 8);

  ComplexityReport r = measure_rkt(zeros(8), b);
  CHECK(r.found);
  CHECK(r.value == 20);  // 16 + ceil(log 15)
  CHECK(r.machine.hex() == "60a0");
  CHECK(r.t == 15);
  CHECK(r.prob == Dyadic::one());

  // Witness replay through the independent tape-enumeration engine.
  OutputDistribution d = output_distribution(r.machine, r.aux, r.t);
  CHECK(d.of(zeros(8)) == r.prob);

  // Out of reach when the step budget cannot host the loop.
  ComplexityBudget tight = b;
  tight.max_log_t = 3;  // t <= 8 < 15
  CHECK_FALSE(measure_rkt(zeros(8), tight).found);
}

TEST_CASE("fixed-step cost is not monotone under truncation semantics") {
  ComplexityBudget b;
  // "000" via [OUT0, JMP 0] works only while the loop is mid-flight.
  ComplexityReport r5 = measure_rk_t(Bits::parse("000"), 5, b);
  CHECK(r5.value == 16);
  CHECK(r5.machine.hex() == "60a0");
  ComplexityReport r6 = measure_rk_t(Bits::parse("000"), 6, b);
  CHECK(r6.value == 16);
  ComplexityReport r7 = measure_rk_t(Bits::parse("000"), 7, b);
  CHECK(r7.found);
  CHECK(r7.value == 24);  // three bytes; canonical witness leads with RDI
  CHECK(r7.machine.hex() == "0060a1");
  // "00" is covered by a halting two-byte printer at every t >= 2.
  CHECK(measure_rk_t(Bits::parse("00"), 5, b).value == 16);
  CHECK(measure_rk_t(Bits::parse("00"), 5, b).machine.hex() == "6060");

  // Order against the log-term measure is violated too: rkt("000") = 19 via
  // the t=5 loop, but at exactly t = 16 only the 24-bit halting printer
  // survives (halted runs keep their output at every later t).
  CHECK(measure_rkt(Bits::parse("000"), b).value == 19);
  ComplexityReport r16 = measure_rk_t(Bits::parse("000"), 16, b);
  CHECK(r16.value == 24);
  CHECK(r16.machine.hex() == "606060");

  CHECK_THROWS_AS(measure_rk_t(Bits::parse("0"), 0, b), ValidationError);
  CHECK_THROWS_AS(measure_rk_t(Bits::parse("0"), 5000, b), BudgetError);
}

TEST_CASE("census: frozen length-1 table and histogram") {
  ComplexityBudget b;
  Census c = rkt_census(1, b);
  CHECK(c.entries.size() == 2);
  CHECK(c.at(Bits::parse("0")).value == 8);
  CHECK(c.at(Bits::parse("0")).machine.hex() == "60");
  CHECK(c.at(Bits::parse("1")).value == 8);
  CHECK(c.at(Bits::parse("1")).machine.hex() == "40");
  CHECK(c.at(Bits::parse("1")).t == 1);
  auto h = c.histogram();
  CHECK(h.size() == 1);
  CHECK(h[8] == 2);
}

TEST_CASE("census agrees with the single-string measure on every string") {
  ComplexityBudget b;
  for (uint32_t m : {3u, 4u}) {
    Census c = rkt_census(m, b);
    for (uint64_t v = 0; v < (1ull << m); ++v) {
      Bits x = from_msb_value(v, (uint8_t)m);
      ComplexityReport r = measure_rkt(x, b);
      const CensusEntry& e = c.at(x);
      CAPTURE(x.str());
      CHECK(e.value == r.value);
      if (r.found) {
        CHECK(e.machine.hex() == r.machine.hex());
        CHECK(e.aux == r.aux);
        CHECK(e.t == r.t);
        // Replay every witness through the tape-enumeration engine.
        OutputDistribution d = output_distribution(e.machine, e.aux, e.t);
        CHECK(d.of(x) == e.prob);
        CHECK(e.prob.geq_fraction(b.delta_num, b.delta_den));
      }
    }
  }
}

TEST_CASE("census: frozen length-4 spot values") {
  ComplexityBudget b;
  Census c = rkt_census(4, b);
  CHECK(c.at(Bits::parse("0000")).value == 19);  // 16 + ceil(log 7)
  CHECK(c.at(Bits::parse("0000")).machine.hex() == "60a0");
  CHECK(c.at(Bits::parse("0000")).t == 7);
  CHECK(c.at(Bits::parse("1111")).value == 19);
  CHECK(c.at(Bits::parse("0101")).value == 27);
  CHECK(c.at(Bits::parse("0101")).machine.hex() == "6040a0");

  // Counting bound: at most 2^(s+1) * max_log_t strings at or below cost s.
  auto h = c.histogram();
  uint64_t cum = 0;
  for (uint32_t s = 1; s <= 30; ++s) {
    if (h.count(s)) cum += h.at(s);
    CHECK(cum <= (1ull << (s + 1)) * b.max_log_t);
  }
}

TEST_CASE("deterministic-tape cost dominates the randomized cost") {
  ComplexityBudget b;
  for (uint32_t m = 1; m <= 5; ++m) {
    Census kt = kt_census(m, b);
    Census rkt = rkt_census(m, b);
    for (size_t i = 0; i < kt.entries.size(); ++i) {
      if (kt.entries[i].value == kNoWitness) continue;
      CHECK(rkt.entries[i].value != kNoWitness);
      CHECK(rkt.entries[i].value <= kt.entries[i].value);
    }
  }
  // And the deterministic witness for the all-zeros string coincides.
  Census kt8 = kt_census(8, b);
  CHECK(kt8.at(zeros(8)).value == 20);
  CHECK(kt8.at(zeros(8)).machine.hex() == "60a0");
}

TEST_CASE("worker partitioning cannot change a census") {
  ComplexityBudget b;
  Census one = rkt_census(4, b, 1);
  Census three = rkt_census(4, b, 3);
  REQUIRE(one.entries.size() == three.entries.size());
  for (size_t i = 0; i < one.entries.size(); ++i) {
    CHECK(one.entries[i].value == three.entries[i].value);
    CHECK(one.entries[i].machine.hex() == three.entries[i].machine.hex());
    CHECK(one.entries[i].aux == three.entries[i].aux);
    CHECK(one.entries[i].t == three.entries[i].t);
  }
  Census f1 = rk_t_census(3, 8, b, 1);
  Census f2 = rk_t_census(3, 8, b, 2);
  for (size_t i = 0; i < f1.entries.size(); ++i) {
    CHECK(f1.entries[i].value == f2.entries[i].value);
    CHECK(f1.entries[i].machine.hex() == f2.entries[i].machine.hex());
  }
}

TEST_CASE("gap decider: accept matches the swept threshold everywhere") {
  ComplexityBudget b;
  // Instruction granularity keeps every value >= 8, so every census-range
  // string sits at or above ceil(3m/4) and the reject side stays empty.
  for (uint32_t m : {1u, 4u, 8u}) {
    const Census& c = rkt_census_cached(m, b);
    for (uint64_t v = 0; v < (1ull << m); ++v) {
      Bits y = from_msb_value(v, (uint8_t)m);
      uint32_t val = c.at(y).value;
      bool oracle_accepts = val == kNoWitness || 4 * val >= 3 * m;
      CHECK(oracle_accepts);
      CHECK(gap_mrkt(y, b) == GapVerdict::kAccept);
    }
  }
  CHECK_THROWS_AS(gap_mrkt(Bits(), b), BudgetError);
  CHECK_THROWS_AS(gap_mrkt(zeros(13), b), BudgetError);
}

TEST_CASE("gap decider MC mode: no candidates at default ceiling") {
  ComplexityBudget b;
  GapMcConfig cfg;
  CHECK(gap_mc_candidates(8, b, cfg).empty());
  // With no candidate below the threshold the decider accepts regardless of
  // its random tape (and so compiles to a constant circuit downstream).
  for (uint64_t tape = 0; tape < 256; tape += 37) {
    CHECK(gap_mrkt_mc(zeros(8), b, cfg, from_msb_value(tape, 8)) ==
          GapVerdict::kAccept);
  }
  CHECK_THROWS_AS(gap_mrkt_mc(zeros(8), b, cfg, Bits::parse("01")), ValidationError);
}

TEST_CASE("gap decider MC mode: ceiling override makes it tape-sensitive") {
  ComplexityBudget b;
  GapMcConfig cfg;
  cfg.cost_ceiling = 30;
  std::vector<CensusEntry> cands = gap_mc_candidates(1, b, cfg);
  REQUIRE(cands.size() == 4);
  CHECK(cands[0].machine.hex() == "802140");
  CHECK(cands[1].machine.hex() == "802160");
  CHECK(cands[2].machine.hex() == "802240");
  CHECK(cands[3].machine.hex() == "802260");
  CHECK(cands[0].value == 28);  // 24 + ceil(log 16)
  CHECK(cands[0].t == b.max_t());

  // Candidates 0 and 2 replay "1" exactly when their tape slice starts 0.
  Bits y = Bits::parse("1");
  CHECK(gap_mrkt_mc(y, b, cfg, Bits::parse("00000000")) == GapVerdict::kReject);
  CHECK(gap_mrkt_mc(y, b, cfg, Bits::parse("10101010")) == GapVerdict::kAccept);
  CHECK(gap_mrkt_mc(y, b, cfg, Bits::parse("11110000")) == GapVerdict::kReject);
  CHECK(gap_mrkt_mc(y, b, cfg, Bits::parse("11111111")) == GapVerdict::kAccept);
}

TEST_CASE("promise instances at census scale") {
  ComplexityBudget b;
  PromiseSets ps = promise_instances(8, 1, 2, b);
  CHECK(ps.n == 8);
  CHECK(ps.t == 16);
  // Minimum fixed-t witness value is 16 > 8^(1/2), so YES is empty and every
  // string clears the NO threshold n-1 = 7.
  CHECK(ps.yes.empty());
  CHECK(ps.no.size() == 256);
  CHECK(ps.gap_count == 0);
  // Thresholds that collide are refused: 7^16 <= 8^15 puts value 7 = n-1 on
  // the YES side. (At 9/10 the sides touch at 6 vs 7 and stay legal.)
  CHECK_THROWS_AS(promise_instances(8, 15, 16, b), ValidationError);
  CHECK(promise_instances(8, 9, 10, b).no.size() == 256);
  CHECK_THROWS_AS(promise_classify(zeros(8), 16, 1, 20, b), ValidationError);
}

TEST_CASE("promise classification of long strings at large t") {
  ComplexityBudget b;
  // 0^64 at t=128: [OUT0, JMP 0] is mid-loop at step 128 (bit 64 lands at
  // step 127), value 16. At eps = 2/3: 16^3 = 4096 = 64^2, literally YES.
  ComplexityReport r = measure_rk_t(zeros(64), 128, b);
  CHECK(r.found);
  CHECK(r.value == 16);
  CHECK(r.machine.hex() == "60a0");
  CHECK(promise_classify(zeros(64), 128, 2, 3, b) == PromiseClass::kYes);
  // At eps = 1/2 the same value 16 > 8 lands in the gap.
  CHECK(promise_classify(zeros(64), 128, 1, 2, b) == PromiseClass::kGap);

  // An aperiodic long string has no budget witness: NO side.
  Bits hard = zeros(63);
  hard.push_back(1);
  CHECK(promise_classify(hard, 128, 2, 3, b) == PromiseClass::kNo);
}
