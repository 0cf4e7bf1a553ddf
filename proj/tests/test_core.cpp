#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdlab/bits.hpp"
#include "pdlab/circuit.hpp"
#include "pdlab/compile.hpp"
#include "pdlab/distribution.hpp"
#include "pdlab/dyadic.hpp"
#include "pdlab/errors.hpp"
#include "pdlab/machine.hpp"
#include "pdlab/manifest.hpp"
#include "pdlab/rng.hpp"

using namespace pdlab;

TEST_CASE("bit strings parse, print, and order shortlex") {
  Bits b = Bits::parse("0110");
  CHECK(b.size() == 4);
  CHECK(b.str() == "0110");
  CHECK(b.get(0) == 0);
  CHECK(b.get(1) == 1);
  CHECK(Bits::parse("1") < Bits::parse("00"));
  CHECK(Bits::parse("01") < Bits::parse("10"));
  CHECK(Bits::parse("01").prefix_of(Bits::parse("0110")));
  CHECK(!Bits::parse("11").prefix_of(Bits::parse("0110")));
  CHECK(msb_first_value(Bits::parse("110")) == 6);
  CHECK(from_msb_value(6, 3).str() == "110");
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(16) == 4);
}

TEST_CASE("dyadic arithmetic is exact and canonical") {
  Dyadic half = Dyadic::pow2_inv(1);
  CHECK(half + half == Dyadic::one());
  CHECK(Dyadic::ratio(4, 3).num == 1);  // 4/8 -> 1/2
  CHECK(Dyadic::ratio(4, 3).e == 1);
  CHECK(abs_diff(Dyadic::ratio(3, 2), half) == Dyadic::pow2_inv(2));
  CHECK(Dyadic::ratio(5, 3).cmp_fraction(2, 3) < 0);   // 5/8 < 2/3
  CHECK(Dyadic::ratio(11, 4).geq_fraction(2, 3));      // 11/16 >= 2/3
  CHECK(Dyadic::zero().leq_fraction(0, 1));
  CHECK(Dyadic::ratio(3, 2).str() == "3/2^2");
}

TEST_CASE("samplers are deterministic given identifier, n, and seed") {
  Sampler a("x", 7, 42), b("x", 7, 42), c("x", 7, 43);
  bool same = true, diff = false;
  for (int i = 0; i < 64; i++) {
    uint64_t va = a.next_u64();
    same = same && va == b.next_u64();
    diff = diff || va != c.next_u64();
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("program execution follows the opcode semantics") {
  SUBCASE("plain output then halt") {
    auto m = Program::assemble({{Op::kOut1, 0}, {Op::kHalt, 0}});
    auto r = exec_program(m, Bits(), 4, Bits());
    CHECK(r.output.str() == "1");
    CHECK(r.halted);
    CHECK(r.steps == 2);
  }
  SUBCASE("branch skips forward only when the flag is set") {
    auto m = Program::assemble({{Op::kRnd, 0},
                                {Op::kBrf, 2},
                                {Op::kOut0, 0},
                                {Op::kHalt, 0},
                                {Op::kOut1, 0},
                                {Op::kHalt, 0}});
    CHECK(exec_program(m, Bits(), 8, Bits::parse("1")).output.str() == "1");
    CHECK(exec_program(m, Bits(), 8, Bits::parse("0")).output.str() == "0");
  }
  SUBCASE("self-loop truncates at the budget") {
    auto m = Program::assemble({{Op::kJmp, 0}});
    auto r = exec_program(m, Bits(), 5, Bits());
    CHECK(!r.halted);
    CHECK(r.steps == 5);
    CHECK(r.output.empty());
  }
  SUBCASE("input reads past the end return zero") {
    auto m = Program::assemble(
        {{Op::kRdi, 0}, {Op::kBrf, 2}, {Op::kOut0, 0}, {Op::kHalt, 0}, {Op::kOut1, 0}});
    CHECK(exec_program(m, Bits::parse("1"), 8, Bits()).output.str() == "1");
    CHECK(exec_program(m, Bits::parse("0"), 8, Bits()).output.str() == "0");
    CHECK(exec_program(m, Bits(), 8, Bits()).output.str() == "0");
    CHECK(exec_program(m, Bits(), 8, Bits()).input_used == 1);
  }
  SUBCASE("invalid opcode decodes to halt") {
    Program m(std::vector<uint8_t>{0xE7, 0x40});
    auto r = exec_program(m, Bits(), 4, Bits());
    CHECK(r.halted);
    CHECK(r.output.empty());
  }
  SUBCASE("falling off the end halts") {
    auto m = Program::assemble({{Op::kOut0, 0}, {Op::kOut0, 0}});
    auto r = exec_program(m, Bits(), 10, Bits());
    CHECK(r.halted);
    CHECK(r.output.str() == "00");
    CHECK(r.steps == 2);
  }
  SUBCASE("acceptance is first output bit one") {
    auto acc = Program::assemble({{Op::kOut1, 0}, {Op::kOut0, 0}});
    auto rej = Program::assemble({{Op::kOut0, 0}, {Op::kOut1, 0}});
    CHECK(accepts(exec_program(acc, Bits(), 4, Bits())));
    CHECK(!accepts(exec_program(rej, Bits(), 4, Bits())));
    CHECK(!accepts(exec_program(Program(), Bits(), 4, Bits())));
  }
}

TEST_CASE("program hex round-trips and validates") {
  auto m = Program::assemble({{Op::kRdi, 0}, {Op::kBrf, 1}, {Op::kOut1, 0}});
  CHECK(m.hex() == "002140");
  CHECK(Program::from_hex("002140") == m);
  CHECK_THROWS_AS(Program::from_hex("0x1"), ValidationError);
  CHECK_THROWS_AS(Program::from_hex("zz"), ValidationError);
  CHECK(m.targets_in_range());
  CHECK(!Program::assemble({{Op::kBrf, 31}}).targets_in_range());
  CHECK(!Program::assemble({{Op::kJmp, 5}}).targets_in_range());
  CHECK(Program::assemble({{Op::kJmp, 1}}).targets_in_range());
}

TEST_CASE("machine enumeration is a stable bijection") {
  CHECK(machine_at(0).code.empty());
  CHECK(machine_at(1).code == std::vector<uint8_t>{0x00});
  CHECK(machine_at(256).code == std::vector<uint8_t>{0xFF});
  CHECK(machine_at(257).code == (std::vector<uint8_t>{0x00, 0x00}));
  CHECK(machine_at(65793).code == (std::vector<uint8_t>{0x00, 0x00, 0x00}));
  for (uint64_t i = 0; i < 10000; i++) CHECK(encode_machine(machine_at(i)) == i);
  for (uint64_t i : {65792ull, 65793ull, 74305ull, 16843009ull})
    CHECK(encode_machine(machine_at(i)) == i);
  // spot-check injectivity across the 1-/2-byte boundary
  CHECK(machine_at(256).code != machine_at(257).code);
}

static OutputDistribution brute_distribution(const Program& m, const Bits& a,
                                             uint32_t t) {
  OutputDistribution d;
  for (uint64_t y = 0; y < (1ull << t); y++) {
    Bits tape;
    for (uint32_t i = 0; i < t; i++) tape.push_back((y >> i) & 1);
    auto r = exec_program(m, a, t, tape);
    auto [it, fresh] = d.mass.try_emplace(r.output, Dyadic::ratio(1, (int)t));
    if (!fresh) it->second = it->second + Dyadic::ratio(1, (int)t);
  }
  return d;
}

TEST_CASE("output distribution enumerates random tapes exactly") {
  SUBCASE("deterministic program has a point distribution") {
    auto m = Program::assemble({{Op::kOut1, 0}, {Op::kHalt, 0}});
    auto d = output_distribution(m, Bits(), 8);
    CHECK(d.mass.size() == 1);
    CHECK(d.of(Bits::parse("1")) == Dyadic::one());
  }
  SUBCASE("one fair bit splits the mass in half") {
    auto m = Program::assemble({{Op::kRnd, 0},
                                {Op::kBrf, 2},
                                {Op::kOut0, 0},
                                {Op::kHalt, 0},
                                {Op::kOut1, 0},
                                {Op::kHalt, 0}});
    auto d = output_distribution(m, Bits(), 8);
    CHECK(d.of(Bits::parse("0")) == Dyadic::pow2_inv(1));
    CHECK(d.of(Bits::parse("1")) == Dyadic::pow2_inv(1));
    CHECK(acceptance_probability(m, Bits(), 8) == Dyadic::pow2_inv(1));
  }
  SUBCASE("two fair bits give four quarter outputs") {
    auto m = Program::assemble({{Op::kRnd, 0},
                                {Op::kBrf, 2},
                                {Op::kOut0, 0},
                                {Op::kJmp, 5},
                                {Op::kOut1, 0},
                                {Op::kRnd, 0},
                                {Op::kBrf, 2},
                                {Op::kOut0, 0},
                                {Op::kHalt, 0},
                                {Op::kOut1, 0}});
    auto d = output_distribution(m, Bits(), 12);
    CHECK(d.mass.size() == 4);
    for (auto& [out, p] : d.mass) {
      CHECK(out.size() == 2);
      CHECK(p == Dyadic::pow2_inv(2));
    }
    CHECK(d.total() == Dyadic::one());

    // Monte Carlo cross-check: each output lands within 1/50 of 1/4.
    Sampler rng("dist-mc", 2, 7);
    const int kLog = 17;
    std::map<std::string, uint64_t> counts;
    for (uint64_t i = 0; i < (1ull << kLog); i++) {
      Bits tape = rng.next_bits(12);
      counts[exec_program(m, Bits(), 12, tape).output.str()]++;
    }
    for (auto& [out, c] : counts)
      CHECK(abs_diff(Dyadic::ratio(c, kLog), Dyadic::pow2_inv(2)).leq_fraction(1, 50));
  }
  SUBCASE("truncated runs keep their partial output mass") {
    auto m = Program::assemble({{Op::kOut1, 0}, {Op::kJmp, 0}});
    auto d = output_distribution(m, Bits(), 5);
    CHECK(d.of(Bits::parse("111")) == Dyadic::one());  // steps 1,3,5 emit
    CHECK(d.total() == Dyadic::one());
  }
  SUBCASE("budget above the cap is refused") {
    CHECK_THROWS_AS(output_distribution(Program(), Bits(), 25), BudgetError);
  }
  SUBCASE("agrees with exhaustive tape enumeration on sampled programs") {
    Sampler rng("dist-exhaustive", 0, 11);
    for (int trial = 0; trial < 30; trial++) {
      size_t len = 1 + rng.next_below(4);
      std::vector<uint8_t> code;
      for (size_t i = 0; i < len; i++) code.push_back((uint8_t)rng.next_below(256));
      Program m(std::move(code));
      Bits a = rng.next_bits((uint8_t)rng.next_below(3));
      for (uint32_t t : {1u, 3u, 7u, 10u}) {
        auto exact = output_distribution(m, a, t);
        auto brute = brute_distribution(m, a, t);
        CHECK(exact.mass.size() == brute.mass.size());
        for (auto& [out, p] : exact.mass) CHECK(brute.of(out) == p);
        CHECK(exact.total() == Dyadic::one());
      }
    }
  }
}

TEST_CASE("circuit evaluation follows gate semantics") {
  CircuitBuilder b(2);
  uint32_t one = b.constant(true);
  Circuit c1 = b.take(one);
  CHECK(c1.eval({}) == true);

  CircuitBuilder bn(1);
  Circuit cn = bn.take(bn.gate_not(bn.input(0)));
  CHECK(cn.eval({1}) == false);
  CHECK(cn.eval({0}) == true);

  CircuitBuilder ba(2);
  Circuit ca = ba.take(ba.gate_and(ba.input(0), ba.input(1)));
  CHECK(ca.eval({1, 1}) == true);
  CHECK(ca.eval({1, 0}) == false);
  CHECK(ca.eval_packed(0b11) == true);
  CHECK(ca.eval_packed(0b01) == false);

  CircuitBuilder bx(3);
  Circuit cx = bx.take(bx.gate_xor(bx.gate_xor(bx.input(0), bx.input(1)), bx.input(2)));
  int ones = 0;
  for (uint64_t y = 0; y < 8; y++) ones += cx.eval_packed(y);
  CHECK(ones == 4);
}

TEST_CASE("netlists round-trip byte-exactly and tolerate comments") {
  CircuitBuilder b(3);
  uint32_t g = b.mux(b.input(0), b.gate_xor(b.input(1), b.input(2)), b.constant(false));
  Circuit c = b.take(g);
  c.validate();
  std::string text = c.to_netlist();
  Circuit back = Circuit::from_netlist(text);
  CHECK(back.to_netlist() == text);
  for (uint64_t y = 0; y < 8; y++) CHECK(back.eval_packed(y) == c.eval_packed(y));

  std::string commented = "# comment line\r\n" + text + "# trailing\n";
  CHECK(Circuit::from_netlist(commented).to_netlist() == text);

  CHECK_THROWS_AS(Circuit::from_netlist("inputs 1\noutput g0\n"), ValidationError);
  CHECK_THROWS_AS(Circuit::from_netlist("g0 = INPUT 0\n"), ValidationError);
  CHECK_THROWS_AS(Circuit::from_netlist("inputs 1\ng0 = BOGUS 0\noutput g0\n"),
                  ValidationError);
  // operands must reference earlier gates
  CHECK_THROWS_AS(
      Circuit::from_netlist("inputs 1\ng0 = INPUT 0\ng1 = AND2 g0 g2\ng2 = INPUT 0\noutput g1\n"),
      ValidationError);
}

TEST_CASE("builder folds constants") {
  CircuitBuilder b(2);
  uint32_t x = b.input(0);
  CHECK(b.gate_and(x, b.constant(false)) == b.constant(false));
  CHECK(b.gate_and(x, b.constant(true)) == x);
  CHECK(b.gate_or(x, b.constant(true)) == b.constant(true));
  CHECK(b.gate_xor(x, b.constant(false)) == x);
  CHECK(b.mux(b.constant(true), x, b.input(1)) == x);
  size_t before = b.gate_count();
  CHECK(b.mux(x, x, x) == x);  // equal branches add no gates
  CHECK(b.gate_count() == before);
}

TEST_CASE("compiled circuits match execution on every tape") {
  auto check_equiv = [](const Program& m, const Bits& a, uint32_t t) {
    Circuit c = compile_acceptance(m, a, t);
    c.validate();
    CHECK(c.input_arity == t);
    for (uint64_t y = 0; y < (1ull << t); y++) {
      Bits tape;
      for (uint32_t i = 0; i < t; i++) tape.push_back((y >> i) & 1);
      bool want = accepts(exec_program(m, a, t, tape));
      if (c.eval_packed(y) != want) {
        CAPTURE(m.hex());
        CAPTURE(a.str());
        CAPTURE(t);
        CAPTURE(y);
        CHECK(c.eval_packed(y) == want);
        return;
      }
    }
    size_t bound = (size_t)manifest().compiler_k * t * (size_t)std::max(1, ceil_log2(t));
    CHECK(c.size() <= bound);
  };

  SUBCASE("hand-picked machines") {
    check_equiv(Program::assemble({{Op::kOut1, 0}}), Bits(), 4);
    check_equiv(Program::assemble({{Op::kOut0, 0}}), Bits(), 4);
    check_equiv(Program(), Bits(), 3);
    check_equiv(Program::assemble({{Op::kRnd, 0},
                                   {Op::kBrf, 2},
                                   {Op::kOut0, 0},
                                   {Op::kHalt, 0},
                                   {Op::kOut1, 0}}),
                Bits(), 6);
    check_equiv(Program::assemble({{Op::kRnd, 0}, {Op::kJmp, 0}}), Bits(), 9);
    check_equiv(Program::assemble({{Op::kRdi, 0}, {Op::kBrf, 1}, {Op::kOut1, 0}}),
                Bits::parse("1"), 5);
  }

  SUBCASE("sampled machines, exhaustive tapes") {
    Sampler rng("compile-exhaustive", 0, 5);
    for (int trial = 0; trial < 25; trial++) {
      size_t len = 1 + rng.next_below(4);
      std::vector<uint8_t> code;
      for (size_t i = 0; i < len; i++) code.push_back((uint8_t)rng.next_below(256));
      Program m(std::move(code));
      for (uint8_t alen : {0, 2}) {
        Bits a = rng.next_bits(alen);
        for (uint32_t t : {1u, 2u, 5u, 8u, 12u}) check_equiv(m, a, t);
      }
    }
  }

  SUBCASE("acceptance probability of the compiled circuit matches the walker") {
    auto m = Program::assemble({{Op::kRnd, 0},
                                {Op::kBrf, 2},
                                {Op::kOut0, 0},
                                {Op::kHalt, 0},
                                {Op::kOut1, 0}});
    uint32_t t = 6;
    Circuit c = compile_acceptance(m, Bits(), t);
    uint64_t acc = 0;
    for (uint64_t y = 0; y < (1ull << t); y++) acc += c.eval_packed(y);
    CHECK(Dyadic::ratio(acc, (int)t) == acceptance_probability(m, Bits(), t));
    auto sup = c.support();
    CHECK(sup == std::vector<uint32_t>{0});  // only the first tape bit is wired
  }
}
