#include "pdlab/distribution.hpp"

#include "pdlab/errors.hpp"

namespace pdlab {

namespace {

// Depth-first walk over tape prefixes. State is tiny, so plain recursion over
// the (pc, input_ptr, consumed, output) tuple is fine at enumeration scale.
struct Walker {
  const Program& m;
  const Bits& input;
  uint32_t budget;
  OutputDistribution* dist;
  Dyadic accept_mass;
  bool accept_only;

  void leaf(const Bits& out, int consumed) {
    if (accept_only) {
      if (out.size() > 0 && out.get(0) == 1)
        accept_mass = accept_mass + Dyadic::pow2_inv(consumed);
      return;
    }
    auto [it, fresh] = dist->mass.try_emplace(out, Dyadic::pow2_inv(consumed));
    if (!fresh) it->second = it->second + Dyadic::pow2_inv(consumed);
  }

  void walk(uint32_t pc, uint32_t steps, uint32_t in_ptr, int flag, Bits out,
            int consumed) {
    const uint32_t len = (uint32_t)m.code.size();
    while (true) {
      if (steps >= budget || pc >= len) {
        leaf(out, consumed);
        return;
      }
      uint8_t byte = m.code[pc];
      Op op = instr_op(byte);
      uint8_t arg = instr_arg(byte);
      steps++;
      switch (op) {
        case Op::kOut0:
        case Op::kOut1:
          if (out.size() < 64) out.push_back(op == Op::kOut1);
          pc++;
          break;
        case Op::kRdi:
          flag = in_ptr < input.size() ? input.get(in_ptr) : 0;
          in_ptr++;
          pc++;
          break;
        case Op::kBrf:
          pc = flag ? pc + 1 + arg : pc + 1;
          break;
        case Op::kJmp:
          pc = arg;
          break;
        case Op::kHalt:
          leaf(out, consumed);
          return;
        case Op::kRnd:
          walk(pc + 1, steps, in_ptr, 0, out, consumed + 1);
          pc++;
          flag = 1;
          consumed++;
          break;
      }
    }
  }
};

}  // namespace

OutputDistribution output_distribution(const Program& m, const Bits& input,
                                       uint32_t budget) {
  if (budget > kDistributionStepCap)
    throw BudgetError("output_distribution: step budget exceeds exact-enumeration cap");
  OutputDistribution dist;
  Walker w{m, input, budget, &dist, Dyadic::zero(), false};
  w.walk(0, 0, 0, 0, Bits(), 0);
  return dist;
}

Dyadic acceptance_probability(const Program& m, const Bits& input, uint32_t budget) {
  if (budget > kDistributionStepCap)
    throw BudgetError("acceptance_probability: step budget exceeds exact-enumeration cap");
  Walker w{m, input, budget, nullptr, Dyadic::zero(), true};
  w.walk(0, 0, 0, 0, Bits(), 0);
  return w.accept_mass;
}

}  // namespace pdlab
