#include "pdlab/compile.hpp"

#include <map>
#include <tuple>

#include "pdlab/errors.hpp"

namespace pdlab {

namespace {

struct StateKey {
  uint32_t pc, rnd, in;
  bool operator<(const StateKey& o) const {
    return std::tie(pc, rnd, in) < std::tie(o.pc, o.rnd, o.in);
  }
};

struct StateWires {
  uint32_t reach;  // machine is in this state at the current step
  uint32_t flag;   // flag value, meaningful only where reach holds
};

}  // namespace

Circuit compile_acceptance(const Program& m, const Bits& input, uint32_t budget,
                           uint32_t arity) {
  constexpr size_t kStateCap = 1u << 14;
  constexpr size_t kGateCap = 1u << 22;
  CircuitBuilder b(arity);
  uint32_t accept = b.constant(false);
  std::map<StateKey, StateWires> frontier;
  frontier[{0, 0, 0}] = {b.constant(true), b.constant(false)};
  const uint32_t len = (uint32_t)m.code.size();

  auto merge = [&](std::map<StateKey, StateWires>& next, StateKey k, uint32_t reach,
                   uint32_t flag) {
    auto it = next.find(k);
    if (it == next.end()) {
      next.emplace(k, StateWires{reach, flag});
    } else {
      // same-step states are mutually exclusive, so the incumbent's reach
      // wire selects which flag applies
      it->second.flag = b.mux(it->second.reach, it->second.flag, flag);
      it->second.reach = b.gate_or(it->second.reach, reach);
    }
  };

  for (uint32_t step = 0; step < budget && !frontier.empty(); step++) {
    std::map<StateKey, StateWires> next;
    for (auto& [k, w] : frontier) {
      if (k.pc >= len) continue;  // halted with no output yet: rejects
      uint8_t ins = m.code[k.pc];
      Op op = instr_op(ins);
      uint8_t arg = ins & 0x1f;
      switch (op) {
        case Op::kRdi: {
          bool bit = k.in < input.size() && input.get(k.in);
          merge(next, {k.pc + 1, k.rnd, k.in + 1}, w.reach, b.constant(bit));
          break;
        }
        case Op::kBrf: {
          uint32_t taken = b.gate_and(w.reach, w.flag);
          uint32_t fall = b.gate_and(w.reach, b.gate_not(w.flag));
          merge(next, {k.pc + 1u + arg, k.rnd, k.in}, taken, b.constant(true));
          merge(next, {k.pc + 1, k.rnd, k.in}, fall, b.constant(false));
          break;
        }
        case Op::kOut1:
          // first output bit is 1: the run is resolved as accepting
          accept = b.gate_or(accept, w.reach);
          break;
        case Op::kOut0:
          break;  // first output bit is 0: resolved as rejecting
        case Op::kRnd: {
          uint32_t bit = k.rnd < arity ? b.input(k.rnd) : b.constant(false);
          merge(next, {k.pc + 1, k.rnd + 1, k.in}, w.reach, bit);
          break;
        }
        case Op::kJmp:
          merge(next, {arg, k.rnd, k.in}, w.reach, w.flag);
          break;
        case Op::kHalt:
          break;  // empty-so-far output rejects
      }
    }
    if (next.size() > kStateCap) throw BudgetError("compile: state explosion");
    if (b.gate_count() > kGateCap) throw BudgetError("compile: circuit too large");
    frontier = std::move(next);
  }
  return b.take(accept);
}

}  // namespace pdlab
