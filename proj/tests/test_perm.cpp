#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdlab/errors.hpp"
#include "pdlab/machine.hpp"
#include "pdlab/perm.hpp"

using namespace pdlab;

namespace {

PermInstance random_instance(uint32_t p, uint32_t dim, Sampler& s, uint32_t bit = 0) {
  std::vector<uint32_t> e;
  for (uint32_t i = 0; i < dim * dim; i++) e.push_back((uint32_t)s.next_below(p));
  return PermInstance::make(p, dim, std::move(e), bit);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (char c : s) h = (h ^ (uint8_t)c) * 1099511628211ull;
  return h;
}

}  // namespace

TEST_CASE("field arithmetic basics") {
  for (uint32_t p : {5u, 13u}) {
    for (uint32_t a = 1; a < p; a++) {
      CHECK(gf_mul(a, gf_inv(a, p), p) == 1);
      CHECK(gf_pow(a, p - 1, p) == 1);  // Fermat
    }
    CHECK(gf_sub(0, 1, p) == p - 1);
  }
  CHECK(small_prime(13));
  CHECK_FALSE(small_prime(15));
  CHECK_FALSE(small_prime(1));
}

TEST_CASE("permanent: dimension 1 and the 2x2 formula, exhaustively over GF(5)") {
  for (uint32_t a = 0; a < 13; a++) {
    PermInstance inst = PermInstance::make(13, 1, {a});
    CHECK(perm_eval(inst) == a);
    CHECK(perm_naive(inst) == a);
  }
  for (uint32_t a = 0; a < 5; a++)
    for (uint32_t b = 0; b < 5; b++)
      for (uint32_t c = 0; c < 5; c++)
        for (uint32_t d = 0; d < 5; d++) {
          PermInstance inst = PermInstance::make(5, 2, {a, b, c, d});
          uint32_t expect = (a * d + c * b) % 5;
          CHECK(perm_eval(inst) == expect);
          CHECK(perm_naive(inst) == expect);
        }
}

TEST_CASE("Ryser agrees with the permutation-sum oracle") {
  // Exhaustive at dimension 3 over GF(2).
  for (uint32_t w = 0; w < 512; w++) {
    std::vector<uint32_t> e;
    for (int i = 0; i < 9; i++) e.push_back((w >> i) & 1);
    PermInstance inst = PermInstance::make(2, 3, std::move(e));
    CHECK(perm_eval(inst) == perm_naive(inst));
  }
  // Random at dimensions 4 and 5 over GF(13).
  Sampler s("perm-ryser", 0, 1);
  for (int i = 0; i < 50; i++) {
    PermInstance inst = random_instance(13, 4, s);
    CHECK(perm_eval(inst) == perm_naive(inst));
  }
  for (int i = 0; i < 5; i++) {
    PermInstance inst = random_instance(13, 5, s);
    CHECK(perm_eval(inst) == perm_naive(inst));
  }
  PermInstance big = random_instance(13, 9, s);
  CHECK_THROWS_AS(perm_eval(big), BudgetError);
}

TEST_CASE("wire encoding: frozen layout, round trip, constant-size oracle") {
  PermInstance seven = PermInstance::make(13, 1, {7}, 0);
  CHECK(seven.wire().str() == "0000001110");
  CHECK(PermInstance::from_wire(seven.wire()) == seven);

  // Round trip across every dimension-1 instance and target bit.
  for (uint32_t v = 0; v < 13; v++)
    for (uint32_t k = 0; k < 4; k++) {
      PermInstance inst = PermInstance::make(13, 1, {v}, k);
      CHECK(PermInstance::from_wire(inst.wire()) == inst);
    }
  Sampler s("perm-wire", 0, 2);
  for (int i = 0; i < 20; i++) {
    PermInstance inst = random_instance(13, 1 + (uint32_t)s.next_below(3), s,
                                        (uint32_t)s.next_below(4));
    CHECK(PermInstance::from_wire(inst.wire()) == inst);
  }

  Bits tampered = seven.wire();
  tampered.w ^= 1;  // flip the guard
  CHECK_THROWS_AS(PermInstance::from_wire(tampered), ValidationError);

  // The 3-byte program "read guard, skip OUT1 if set" answers every
  // dimension-1 decision query from offset 0 alone.
  Program oracle3 = Program::from_hex("002140");
  for (uint32_t v = 0; v < 13; v++)
    for (uint32_t k = 0; k < 4; k++) {
      PermInstance inst = PermInstance::make(13, 1, {v}, k);
      RunResult r = exec_program_fn(oracle3, inst.wire(), 16, [](size_t) { return 0; });
      CHECK((int)accepts(r) == perm_decision_bit(inst));
    }
}

TEST_CASE("downward self-reduction: honest oracle and injected corruption") {
  PermOracle honest = [](const PermInstance& m) { return perm_eval(m); };

  uint32_t queries = 0;
  PermOracle counting = [&](const PermInstance& m) {
    queries++;
    return perm_eval(m);
  };

  for (uint32_t a = 0; a < 5; a++)
    for (uint32_t b = 0; b < 5; b++)
      for (uint32_t c = 0; c < 5; c++)
        for (uint32_t d = 0; d < 5; d++) {
          PermInstance inst = PermInstance::make(5, 2, {a, b, c, d});
          CHECK(perm_dsr(inst, honest) == perm_eval(inst));
        }

  Sampler s("perm-dsr", 0, 3);
  for (int i = 0; i < 10; i++) {
    PermInstance inst = random_instance(13, 5, s);
    queries = 0;
    CHECK(perm_dsr(inst, counting) == perm_eval(inst));
    CHECK(queries == 5);
  }

  // Corrupting exactly one minor shifts the output by a(0,j) times the
  // injected offset.
  PermInstance inst = random_instance(13, 4, s);
  PermInstance bad_minor = inst.minor_first_row(1);
  PermOracle corrupt = [&](const PermInstance& m) {
    uint32_t v = perm_eval(m);
    if (m == bad_minor) v = gf_add(v, 3, m.p);
    return v;
  };
  uint32_t expected = gf_add(perm_eval(inst), gf_mul(inst.at(0, 1), 3, 13), 13);
  CHECK(perm_dsr(inst, corrupt) == expected);

  CHECK_THROWS_AS(perm_dsr(PermInstance::make(13, 1, {4}), honest), ValidationError);
}

TEST_CASE("random self-correction: honest, 1% corrupted, and pinpoint-corrupted oracles") {
  PermOracle honest = [](const PermInstance& m) { return perm_eval(m); };
  Sampler s("perm-rsr", 0, 4);
  for (uint32_t dim = 2; dim <= 4; dim++)
    for (int i = 0; i < 20; i++) {
      PermInstance inst = random_instance(13, dim, s);
      Sampler trial("perm-rsr-trial", dim, (uint64_t)i);
      CHECK(perm_selfcorrect(inst, honest, 5, trial) == perm_eval(inst));
    }

  // Virtual tabulated corruption: ~1% of the 3x3 domain keyed by a hash of
  // the serialized instance.
  PermOracle one_pct = [](const PermInstance& m) {
    uint32_t v = perm_eval(m);
    if (fnv1a(m.serialize()) % 100 == 0) v = gf_add(v, 1, m.p);
    return v;
  };
  int correct = 0;
  for (int run = 0; run < 200; run++) {
    Sampler rs("perm-rsr-mc", 0, (uint64_t)run);
    PermInstance inst = random_instance(13, 3, rs);
    if (perm_selfcorrect(inst, one_pct, 25, rs) == perm_eval(inst)) correct++;
  }
  CHECK(correct >= 150);  // 3/4 of the runs; empirically nearly all

  // An adversary corrupting only the queried instance itself is invisible:
  // random lines avoid any fixed point essentially always.
  for (int run = 0; run < 50; run++) {
    Sampler rs("perm-rsr-pin", 1, (uint64_t)run);
    PermInstance inst = random_instance(13, 3, rs);
    PermOracle pin = [&](const PermInstance& m) {
      uint32_t v = perm_eval(m);
      if (m == inst) v = gf_add(v, 5, m.p);
      return v;
    };
    CHECK(perm_selfcorrect(inst, pin, 5, rs) == perm_eval(inst));
  }

  PermInstance inst = random_instance(13, 3, s);
  CHECK_THROWS_AS(perm_selfcorrect(inst, honest, 0, s), ValidationError);
  PermInstance small = random_instance(7, 3, s);
  CHECK_THROWS_AS(perm_selfcorrect(small, honest, 3, s), ValidationError);
}

TEST_CASE("instance checker: honest completeness and adversarial soundness") {
  PermOracle honest = [](const PermInstance& m) { return perm_eval(m); };

  Sampler s("perm-check", 0, 5);
  for (uint32_t dim = 2; dim <= 4; dim++)
    for (int i = 0; i < 10; i++) {
      PermInstance inst = random_instance(13, dim, s);
      uint32_t truth = perm_eval(inst);
      Sampler cs("perm-check-run", dim, (uint64_t)i);
      CHECK(perm_check(inst, truth, honest, cs, 3) == CheckVerdict::kAccept);
      Sampler cs2("perm-check-run2", dim, (uint64_t)i);
      CHECK(perm_check(inst, (truth + 1) % 13, honest, cs2, 1) == CheckVerdict::kUnknown);
    }

  // All-flipping adversary: every answer shifted by 1. Wrong values must be
  // accepted in at most a third of the runs (Monte Carlo).
  PermOracle flip = [](const PermInstance& m) {
    return gf_add(perm_eval(m), 1, m.p);
  };
  int wrong_accepts = 0, runs = 300;
  for (int run = 0; run < runs; run++) {
    Sampler rs("perm-check-adv", 0, (uint64_t)run);
    PermInstance inst = random_instance(13, 3, rs);
    uint32_t truth = perm_eval(inst);
    uint32_t lie = (truth + 1 + (uint32_t)rs.next_below(12)) % 13;
    if (lie == truth) lie = (lie + 1) % 13;
    if (perm_check(inst, lie, flip, rs, 1) == CheckVerdict::kAccept) wrong_accepts++;
  }
  CHECK(wrong_accepts <= runs / 3);

  PermInstance inst = random_instance(13, 3, s);
  CHECK_THROWS_AS(perm_check(inst, 13, honest, s, 1), ValidationError);
  CHECK_THROWS_AS(perm_check(inst, 0, honest, s, 0), ValidationError);
  PermInstance five = random_instance(13, 5, s);
  CHECK_THROWS_AS(perm_check(five, 0, honest, s, 1), ValidationError);
}

TEST_CASE("identity-block padding preserves the permanent") {
  Sampler s("perm-pad", 0, 6);
  for (int i = 0; i < 20; i++) {
    uint32_t dim = 1 + (uint32_t)s.next_below(4);
    PermInstance inst = random_instance(13, dim, s);
    PermInstance padded = pad_matrix(inst, dim + 1 + (uint32_t)s.next_below(3));
    CHECK(perm_eval(padded) == perm_eval(inst));
  }
  PermInstance inst = random_instance(13, 2, s);
  CHECK(pad_matrix(pad_matrix(inst, 5), 7) == pad_matrix(inst, 7));
  CHECK(pad_matrix(inst, 3).dim == 3);
  CHECK_THROWS_AS(pad_matrix(inst, 2), ValidationError);
}

TEST_CASE("framed bit strings: round trip and idempotent re-framing") {
  FramedBits f = frame(Bits::parse("101"), 8);
  CHECK(f.bits().str() == "10110000");
  CHECK(unframe(f.bits()) == Bits::parse("101"));
  CHECK(frame(frame(Bits::parse("101"), 6), 9) == frame(Bits::parse("101"), 9));

  for (uint8_t len = 1; len <= 6; len++)
    for (uint64_t w = 0; w < (1ull << len); w++) {
      Bits core(w, len);
      for (uint8_t m = len + 1; m <= 10; m++) CHECK(unframe(frame(core, m).bits()) == core);
    }

  CHECK_THROWS_AS(frame(Bits::parse("101"), 3), ValidationError);
  CHECK_THROWS_AS(unframe(Bits::parse("0000")), ValidationError);
}

TEST_CASE("instance files round trip") {
  Sampler s("perm-io", 0, 7);
  for (int i = 0; i < 10; i++) {
    PermInstance inst = random_instance(13, 1 + (uint32_t)s.next_below(4), s);
    PermInstance back = PermInstance::parse(inst.serialize());
    CHECK(back.p == inst.p);
    CHECK(back.dim == inst.dim);
    CHECK(back.a == inst.a);
  }
  CHECK_THROWS_AS(PermInstance::parse("2 13 1 2 3"), ValidationError);  // short
  CHECK_THROWS_AS(PermInstance::parse("1 12 5"), ValidationError);     // composite p
  CHECK_THROWS_AS(PermInstance::parse(""), ValidationError);
}
