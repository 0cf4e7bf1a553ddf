#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pdlab {

enum class Gate : uint8_t { kInput = 0, kConst0, kConst1, kNot, kAnd2, kOr2, kXor2 };

const char* gate_name(Gate g);

// Boolean circuit in topological order. Gate operands refer to earlier gate
// indices, except for kInput where `a` is the input slot.
struct Circuit {
  struct Node {
    Gate kind;
    uint32_t a = 0;
    uint32_t b = 0;
  };

  uint32_t input_arity = 0;
  std::vector<Node> gates;
  uint32_t output = 0;  // index of the output gate

  size_t size() const { return gates.size(); }

  // Serialized byte length times 8; the canonical description length.
  size_t description_bits() const { return to_netlist().size() * 8; }

  bool eval(const std::vector<int>& inputs) const;
  bool eval_packed(uint64_t inputs) const;  // input slot i = bit i

  // Input slots actually wired to a gate. Unwired slots cannot affect the
  // output, which exact estimators exploit.
  std::vector<uint32_t> support() const;

  void validate() const;  // throws ValidationError on malformed structure

  // Text netlist:
  //   inputs <n>
  //   g0 = INPUT 0
  //   g1 = AND2 g0 g0
  //   output g1
  // Lines starting with '#' are comments; serialization is deterministic so
  // parse(serialize(c)) round-trips byte-exactly once comments are fixed.
  std::string to_netlist() const;
  static Circuit from_netlist(const std::string& text);
};

// Shrinks the declared arity to the highest wired slot + 1. Unwired trailing
// slots cannot affect the output; dropping them lets seed-enumerated
// estimators bound their work by what the circuit actually reads.
Circuit trim_unused_arity(const Circuit& c);

// Convenience builder used by the machine compiler and the predictors.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(uint32_t input_arity) { c_.input_arity = input_arity; }

  uint32_t input(uint32_t slot);
  uint32_t constant(bool v);
  uint32_t gate_not(uint32_t a);
  uint32_t gate_and(uint32_t a, uint32_t b);
  uint32_t gate_or(uint32_t a, uint32_t b);
  uint32_t gate_xor(uint32_t a, uint32_t b);
  // (sel ? hi : lo)
  uint32_t mux(uint32_t sel, uint32_t hi, uint32_t lo);

  size_t gate_count() const { return c_.gates.size(); }

  Circuit take(uint32_t output);

 private:
  uint32_t push(Gate k, uint32_t a, uint32_t b);
  // constant folding keeps compiled machine circuits small
  bool is_const(uint32_t g, bool v) const;

  Circuit c_;
  int const0_ = -1, const1_ = -1;
};

}  // namespace pdlab
