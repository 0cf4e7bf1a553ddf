#include "pdlab/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "pdlab/errors.hpp"

namespace pdlab {

const char* gate_name(Gate g) {
  switch (g) {
    case Gate::kInput: return "INPUT";
    case Gate::kConst0: return "CONST0";
    case Gate::kConst1: return "CONST1";
    case Gate::kNot: return "NOT";
    case Gate::kAnd2: return "AND2";
    case Gate::kOr2: return "OR2";
    case Gate::kXor2: return "XOR2";
  }
  return "?";
}

static bool gate_from_name(const std::string& s, Gate* out) {
  static const std::pair<const char*, Gate> table[] = {
      {"INPUT", Gate::kInput}, {"CONST0", Gate::kConst0}, {"CONST1", Gate::kConst1},
      {"NOT", Gate::kNot},     {"AND2", Gate::kAnd2},     {"OR2", Gate::kOr2},
      {"XOR2", Gate::kXor2}};
  for (auto& [name, g] : table)
    if (s == name) {
      *out = g;
      return true;
    }
  return false;
}

bool Circuit::eval(const std::vector<int>& inputs) const {
  std::vector<char> val(gates.size());
  for (size_t i = 0; i < gates.size(); i++) {
    const Node& n = gates[i];
    switch (n.kind) {
      case Gate::kInput:
        val[i] = n.a < inputs.size() ? (char)(inputs[n.a] & 1) : 0;
        break;
      case Gate::kConst0: val[i] = 0; break;
      case Gate::kConst1: val[i] = 1; break;
      case Gate::kNot: val[i] = !val[n.a]; break;
      case Gate::kAnd2: val[i] = val[n.a] && val[n.b]; break;
      case Gate::kOr2: val[i] = val[n.a] || val[n.b]; break;
      case Gate::kXor2: val[i] = val[n.a] ^ val[n.b]; break;
    }
  }
  return gates.empty() ? false : val[output];
}

bool Circuit::eval_packed(uint64_t inputs) const {
  std::vector<char> val(gates.size());
  for (size_t i = 0; i < gates.size(); i++) {
    const Node& n = gates[i];
    switch (n.kind) {
      case Gate::kInput:
        val[i] = n.a < 64 ? (char)((inputs >> n.a) & 1) : 0;
        break;
      case Gate::kConst0: val[i] = 0; break;
      case Gate::kConst1: val[i] = 1; break;
      case Gate::kNot: val[i] = !val[n.a]; break;
      case Gate::kAnd2: val[i] = val[n.a] && val[n.b]; break;
      case Gate::kOr2: val[i] = val[n.a] || val[n.b]; break;
      case Gate::kXor2: val[i] = val[n.a] ^ val[n.b]; break;
    }
  }
  return gates.empty() ? false : val[output];
}

std::vector<uint32_t> Circuit::support() const {
  std::vector<char> used(input_arity, 0);
  for (const Node& n : gates)
    if (n.kind == Gate::kInput && n.a < input_arity) used[n.a] = 1;
  std::vector<uint32_t> slots;
  for (uint32_t i = 0; i < input_arity; i++)
    if (used[i]) slots.push_back(i);
  return slots;
}

Circuit trim_unused_arity(const Circuit& c) {
  std::vector<uint32_t> supp = c.support();
  Circuit out = c;
  out.input_arity = supp.empty() ? 0 : supp.back() + 1;
  return out;
}

void Circuit::validate() const {
  if (gates.empty()) throw ValidationError("circuit has no gates");
  if (output >= gates.size()) throw ValidationError("circuit output out of range");
  for (size_t i = 0; i < gates.size(); i++) {
    const Node& n = gates[i];
    switch (n.kind) {
      case Gate::kInput:
        if (n.a >= input_arity) throw ValidationError("input slot out of range");
        break;
      case Gate::kConst0:
      case Gate::kConst1:
        break;
      case Gate::kNot:
        if (n.a >= i) throw ValidationError("gate operand not topological");
        break;
      default:
        if (n.a >= i || n.b >= i) throw ValidationError("gate operand not topological");
    }
  }
}

std::string Circuit::to_netlist() const {
  std::ostringstream os;
  os << "inputs " << input_arity << "\n";
  for (size_t i = 0; i < gates.size(); i++) {
    const Node& n = gates[i];
    os << "g" << i << " = " << gate_name(n.kind);
    if (n.kind == Gate::kInput) {
      os << " " << n.a;
    } else if (n.kind == Gate::kNot) {
      os << " g" << n.a;
    } else if (n.kind != Gate::kConst0 && n.kind != Gate::kConst1) {
      os << " g" << n.a << " g" << n.b;
    }
    os << "\n";
  }
  os << "output g" << output << "\n";
  return os.str();
}

Circuit Circuit::from_netlist(const std::string& text) {
  Circuit c;
  std::istringstream is(text);
  std::string line;
  bool saw_inputs = false, saw_output = false;
  auto gate_ref = [&](const std::string& tok) -> uint32_t {
    if (tok.size() < 2 || tok[0] != 'g')
      throw ValidationError("netlist: expected gate reference, got '" + tok + "'");
    return (uint32_t)std::stoul(tok.substr(1));
  };
  while (std::getline(is, line)) {
    // strip trailing CR and skip blanks/comments
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "inputs") {
      if (saw_inputs) throw ValidationError("netlist: duplicate inputs line");
      ls >> c.input_arity;
      saw_inputs = true;
    } else if (tok == "output") {
      std::string ref;
      ls >> ref;
      c.output = gate_ref(ref);
      saw_output = true;
    } else {
      if (!saw_inputs) throw ValidationError("netlist: gate before inputs line");
      uint32_t idx = gate_ref(tok);
      if (idx != c.gates.size())
        throw ValidationError("netlist: gates must be listed in order");
      std::string eq, op;
      ls >> eq >> op;
      if (eq != "=") throw ValidationError("netlist: expected '='");
      Gate kind;
      if (!gate_from_name(op, &kind)) throw ValidationError("netlist: unknown op " + op);
      Node n{kind, 0, 0};
      if (kind == Gate::kInput) {
        ls >> n.a;
      } else if (kind == Gate::kNot) {
        std::string a;
        ls >> a;
        n.a = gate_ref(a);
      } else if (kind != Gate::kConst0 && kind != Gate::kConst1) {
        std::string a, b;
        ls >> a >> b;
        n.a = gate_ref(a);
        n.b = gate_ref(b);
      }
      c.gates.push_back(n);
    }
  }
  if (!saw_inputs || !saw_output)
    throw ValidationError("netlist: missing inputs or output line");
  c.validate();
  return c;
}

uint32_t CircuitBuilder::push(Gate k, uint32_t a, uint32_t b) {
  c_.gates.push_back({k, a, b});
  return (uint32_t)(c_.gates.size() - 1);
}

bool CircuitBuilder::is_const(uint32_t g, bool v) const {
  Gate k = c_.gates[g].kind;
  return v ? k == Gate::kConst1 : k == Gate::kConst0;
}

uint32_t CircuitBuilder::input(uint32_t slot) { return push(Gate::kInput, slot, 0); }

uint32_t CircuitBuilder::constant(bool v) {
  int& cache = v ? const1_ : const0_;
  if (cache < 0) cache = (int)push(v ? Gate::kConst1 : Gate::kConst0, 0, 0);
  return (uint32_t)cache;
}

uint32_t CircuitBuilder::gate_not(uint32_t a) {
  if (is_const(a, false)) return constant(true);
  if (is_const(a, true)) return constant(false);
  return push(Gate::kNot, a, 0);
}

uint32_t CircuitBuilder::gate_and(uint32_t a, uint32_t b) {
  if (is_const(a, false) || is_const(b, false)) return constant(false);
  if (is_const(a, true)) return b;
  if (is_const(b, true)) return a;
  return push(Gate::kAnd2, a, b);
}

uint32_t CircuitBuilder::gate_or(uint32_t a, uint32_t b) {
  if (is_const(a, true) || is_const(b, true)) return constant(true);
  if (is_const(a, false)) return b;
  if (is_const(b, false)) return a;
  return push(Gate::kOr2, a, b);
}

uint32_t CircuitBuilder::gate_xor(uint32_t a, uint32_t b) {
  if (is_const(a, false)) return b;
  if (is_const(b, false)) return a;
  if (is_const(a, true)) return gate_not(b);
  if (is_const(b, true)) return gate_not(a);
  return push(Gate::kXor2, a, b);
}

uint32_t CircuitBuilder::mux(uint32_t sel, uint32_t hi, uint32_t lo) {
  if (hi == lo) return hi;
  if (is_const(sel, true)) return hi;
  if (is_const(sel, false)) return lo;
  return gate_or(gate_and(sel, hi), gate_and(gate_not(sel), lo));
}

Circuit CircuitBuilder::take(uint32_t output) {
  if (c_.gates.empty()) constant(false);
  c_.output = output;
  return std::move(c_);
}

}  // namespace pdlab
