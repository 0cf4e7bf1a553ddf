#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdlab/bits.hpp"

namespace pdlab {

// One instruction is a single byte: high 3 bits opcode, low 5 bits operand.
// Opcode 7 decodes to HALT so that every byte string is a program.
enum class Op : uint8_t {
  kRdi = 0,   // consume next input bit -> flag (past-end reads 0)
  kBrf = 1,   // if flag is 1, skip `arg` instructions (pc <- pc + 1 + arg)
  kOut1 = 2,  // emit 1
  kOut0 = 3,  // emit 0
  kRnd = 4,   // consume next tape bit -> flag
  kJmp = 5,   // absolute jump: pc <- arg
  kHalt = 6,
};

constexpr uint8_t make_instr(Op op, uint8_t arg = 0) {
  return (uint8_t)(((uint8_t)op << 5) | (arg & 0x1f));
}
constexpr Op instr_op(uint8_t byte) {
  uint8_t op = byte >> 5;
  return op >= 6 ? Op::kHalt : (Op)op;
}
constexpr uint8_t instr_arg(uint8_t byte) { return byte & 0x1f; }

// A program is its raw bytecode; decoding happens at execution time.
struct Program {
  std::vector<uint8_t> code;

  Program() = default;
  explicit Program(std::vector<uint8_t> c) : code(std::move(c)) {}
  static Program assemble(std::initializer_list<std::pair<Op, uint8_t>> instrs) {
    Program p;
    for (auto& [op, arg] : instrs) p.code.push_back(make_instr(op, arg));
    return p;
  }

  size_t size() const { return code.size(); }
  // Description length in bits: 8 per instruction.
  size_t size_bits() const { return code.size() * 8; }

  bool contains(Op op) const {
    for (uint8_t b : code)
      if (instr_op(b) == op) return true;
    return false;
  }

  // Check the static invariant that branch/jump targets stay inside the
  // program (the position one past the end counts as the halt position).
  bool targets_in_range() const;

  std::string hex() const;
  static Program from_hex(const std::string& hex);

  friend bool operator==(const Program& a, const Program& b) { return a.code == b.code; }
};

struct RunResult {
  Bits output;           // emitted bits, in order, truncated at out_cap
  uint32_t steps = 0;    // instructions executed
  uint32_t tape_used = 0;  // tape bits consumed by RND
  uint32_t input_used = 0;  // input bits consumed by RDI
  bool halted = false;   // true if the program stopped before the step budget
};

// Execute for at most `budget` steps. `input` feeds RDI (past-end reads 0),
// `tape` feeds RND and must hold at least `budget` bits. Acceptance for
// decision use is "first output bit is 1".
RunResult exec_program(const Program& m, const Bits& input, uint32_t budget,
                       const Bits& tape);

// Same, with an arbitrary tape callback (bit index -> bit) for long runs.
template <typename TapeFn>
RunResult exec_program_fn(const Program& m, const Bits& input, uint32_t budget,
                          TapeFn&& tape, uint32_t out_cap = 64);

inline bool accepts(const RunResult& r) {
  return r.output.size() > 0 && r.output.get(0) == 1;
}

// Canonical enumeration of all programs: bijective base-256 over bytecode,
// big-endian digits. Index 0 is the empty program; encode(machine_at(i)) == i.
Program machine_at(uint64_t index);
uint64_t encode_machine(const Program& m);

// --- implementation of the templated runner ---

template <typename TapeFn>
RunResult exec_program_fn(const Program& m, const Bits& input, uint32_t budget,
                          TapeFn&& tape, uint32_t out_cap) {
  RunResult r;
  uint32_t pc = 0, out_len = 0;
  int flag = 0;
  const uint32_t len = (uint32_t)m.code.size();
  while (r.steps < budget) {
    if (pc >= len) {
      r.halted = true;
      break;
    }
    uint8_t byte = m.code[pc];
    Op op = instr_op(byte);
    uint8_t arg = instr_arg(byte);
    r.steps++;
    switch (op) {
      case Op::kOut0:
      case Op::kOut1: {
        bool bit = op == Op::kOut1;
        if (out_len < out_cap && out_len < 64) r.output.push_back(bit);
        out_len++;
        pc++;
        break;
      }
      case Op::kRnd:
        flag = tape(r.tape_used) & 1;
        r.tape_used++;
        pc++;
        break;
      case Op::kRdi:
        flag = r.input_used < input.size() ? input.get(r.input_used) : 0;
        r.input_used++;
        pc++;
        break;
      case Op::kBrf:
        pc = flag ? pc + 1 + arg : pc + 1;
        break;
      case Op::kJmp:
        pc = arg;
        break;
      case Op::kHalt:
        r.halted = true;
        break;
    }
    if (r.halted) break;
  }
  return r;
}

}  // namespace pdlab
