#include "pdlab/machine.hpp"

#include <algorithm>

#include "pdlab/errors.hpp"

namespace pdlab {

bool Program::targets_in_range() const {
  const size_t len = code.size();
  for (size_t pc = 0; pc < len; pc++) {
    Op op = instr_op(code[pc]);
    uint8_t arg = instr_arg(code[pc]);
    if (op == Op::kBrf && pc + 1 + arg > len) return false;
    if (op == Op::kJmp && arg > len) return false;
  }
  return true;
}

std::string Program::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(code.size() * 2);
  for (uint8_t b : code) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xf]);
  }
  return s;
}

Program Program::from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw ValidationError("program hex must have even length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ValidationError(std::string("bad hex digit: ") + c);
  };
  Program p;
  for (size_t i = 0; i < hex.size(); i += 2)
    p.code.push_back((uint8_t)((nib(hex[i]) << 4) | nib(hex[i + 1])));
  return p;
}

RunResult exec_program(const Program& m, const Bits& input, uint32_t budget,
                       const Bits& tape) {
  return exec_program_fn(
      m, input, budget, [&](uint32_t i) { return i < tape.size() ? tape.get(i) : 0; });
}

Program machine_at(uint64_t index) {
  // Bijective base-256: peel least-significant digits, which are the last
  // instruction bytes, then reverse.
  std::vector<uint8_t> rev;
  while (index > 0) {
    index--;
    rev.push_back((uint8_t)(index % 256));
    index /= 256;
  }
  std::reverse(rev.begin(), rev.end());
  return Program(std::move(rev));
}

uint64_t encode_machine(const Program& m) {
  uint64_t idx = 0;
  for (uint8_t b : m.code) {
    idx = idx * 256 + (uint64_t)b + 1;
  }
  return idx;
}

}  // namespace pdlab
