#include "pdlab/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "pdlab/errors.hpp"

namespace pdlab {

uint32_t gf_add(uint32_t a, uint32_t b, uint32_t p) { return (a + b) % p; }
uint32_t gf_sub(uint32_t a, uint32_t b, uint32_t p) { return (a + p - b % p) % p; }
uint32_t gf_mul(uint32_t a, uint32_t b, uint32_t p) {
  return (uint32_t)((uint64_t)a * b % p);
}

uint32_t gf_pow(uint32_t a, uint64_t e, uint32_t p) {
  uint32_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = gf_mul(r, a, p);
    a = gf_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

uint32_t gf_inv(uint32_t a, uint32_t p) {
  if (a % p == 0) throw InternalError("gf: inverse of zero");
  return gf_pow(a, p - 2, p);
}

bool small_prime(uint32_t v) {
  if (v < 2) return false;
  for (uint32_t d = 2; d * d <= v; d++)
    if (v % d == 0) return false;
  return true;
}

PermInstance PermInstance::make(uint32_t p, uint32_t dim, std::vector<uint32_t> entries,
                                uint32_t bit) {
  PermInstance inst;
  inst.p = p;
  inst.dim = dim;
  inst.bit = bit;
  inst.a = std::move(entries);
  inst.validate();
  return inst;
}

void PermInstance::validate() const {
  if (!small_prime(p)) throw ValidationError("perm: p is not prime");
  if (dim == 0) throw ValidationError("perm: dimension must be positive");
  if (bit > 3) throw ValidationError("perm: target bit index above 3");
  if (a.size() != (size_t)dim * dim)
    throw ValidationError("perm: entry count does not match the dimension");
  for (uint32_t v : a)
    if (v >= p) throw ValidationError("perm: entry not reduced mod p");
}

PermInstance PermInstance::minor_first_row(uint32_t j) const {
  if (dim < 2) throw ValidationError("perm: no minors at dimension 1");
  PermInstance m;
  m.p = p;
  m.dim = dim - 1;
  m.bit = bit;
  for (uint32_t r = 1; r < dim; r++)
    for (uint32_t c = 0; c < dim; c++)
      if (c != j) m.a.push_back(at(r, c));
  return m;
}

std::string PermInstance::serialize() const {
  std::ostringstream os;
  os << dim << ' ' << p;
  for (uint32_t v : a) os << ' ' << v;
  return os.str();
}

PermInstance PermInstance::parse(const std::string& text) {
  std::istringstream is(text);
  PermInstance inst;
  if (!(is >> inst.dim >> inst.p)) throw ValidationError("perm: malformed instance header");
  uint32_t v;
  while (is >> v) inst.a.push_back(v);
  inst.validate();
  return inst;
}

Bits PermInstance::wire() const {
  validate();
  if (dim > 3) throw BudgetError("perm: wire encoding caps at dimension 3");
  Bits w;
  w.push_back(((at(0, 0) >> bit) & 1) == 0);  // guard = NOT bit_k(a00)
  w.push_back(bit & 1);
  w.push_back((bit >> 1) & 1);
  uint32_t d = dim - 1;
  for (int i = 0; i < 3; i++) w.push_back((d >> i) & 1);
  for (uint32_t v : a)
    for (int i = 0; i < 4; i++) w.push_back((v >> i) & 1);
  return w;
}

PermInstance PermInstance::from_wire(const Bits& w) {
  if (w.size() < 6) throw ValidationError("perm: wire string too short");
  PermInstance inst;
  inst.bit = (uint32_t)w.get(1) | ((uint32_t)w.get(2) << 1);
  inst.dim = 1 + ((uint32_t)w.get(3) | ((uint32_t)w.get(4) << 1) | ((uint32_t)w.get(5) << 2));
  if (w.size() != 6 + 4 * (size_t)inst.dim * inst.dim)
    throw ValidationError("perm: wire length does not match the dimension");
  for (uint32_t e = 0; e < inst.dim * inst.dim; e++) {
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= (uint32_t)w.get(6 + 4 * e + i) << i;
    inst.a.push_back(v);
  }
  inst.validate();
  if ((int)w.get(0) != (((inst.at(0, 0) >> inst.bit) & 1) ? 0 : 1))
    throw ValidationError("perm: wire guard bit is inconsistent");
  return inst;
}

uint32_t perm_eval(const PermInstance& inst) {
  inst.validate();
  if (inst.dim > 8) throw BudgetError("perm: evaluation caps at dimension 8");
  uint32_t n = inst.dim, p = inst.p;
  // Ryser: perm = sum over nonempty S of (-1)^(n-|S|) prod_i sum_{j in S} a_ij.
  uint32_t plus = 0, minus = 0;
  for (uint32_t s = 1; s < (1u << n); s++) {
    uint32_t prod = 1;
    for (uint32_t i = 0; i < n && prod; i++) {
      uint32_t row = 0;
      for (uint32_t j = 0; j < n; j++)
        if (s & (1u << j)) row += inst.at(i, j);
      prod = gf_mul(prod, row % p, p);
    }
    if ((n - (uint32_t)__builtin_popcount(s)) & 1) minus = gf_add(minus, prod, p);
    else plus = gf_add(plus, prod, p);
  }
  return gf_sub(plus, minus, p);
}

uint32_t perm_naive(const PermInstance& inst) {
  inst.validate();
  if (inst.dim > 8) throw BudgetError("perm: evaluation caps at dimension 8");
  std::vector<uint32_t> idx(inst.dim);
  std::iota(idx.begin(), idx.end(), 0);
  uint32_t sum = 0;
  do {
    uint32_t prod = 1;
    for (uint32_t i = 0; i < inst.dim; i++) prod = gf_mul(prod, inst.at(i, idx[i]), inst.p);
    sum = gf_add(sum, prod, inst.p);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return sum;
}

int perm_decision_bit(const PermInstance& inst) {
  return (int)((perm_eval(inst) >> inst.bit) & 1);
}

uint32_t perm_dsr(const PermInstance& inst, const PermOracle& oracle) {
  inst.validate();
  if (inst.dim < 2) throw ValidationError("perm: self-reduction needs dimension >= 2");
  uint32_t sum = 0;
  for (uint32_t j = 0; j < inst.dim; j++)
    sum = gf_add(sum, gf_mul(inst.at(0, j), oracle(inst.minor_first_row(j)), inst.p), inst.p);
  return sum;
}

namespace {

// Value at `x` of the polynomial through (xs[i], ys[i]), all mod p.
uint32_t lagrange_eval(const std::vector<uint32_t>& xs, const std::vector<uint32_t>& ys,
                       uint32_t x, uint32_t p) {
  uint32_t acc = 0;
  for (size_t s = 0; s < xs.size(); s++) {
    uint32_t term = ys[s] % p;
    for (size_t u = 0; u < xs.size(); u++) {
      if (u == s) continue;
      term = gf_mul(term, gf_sub(x, xs[u], p), p);
      term = gf_mul(term, gf_inv(gf_sub(xs[s], xs[u], p), p), p);
    }
    acc = gf_add(acc, term, p);
  }
  return acc;
}

}  // namespace

uint32_t perm_selfcorrect(const PermInstance& inst, const PermOracle& oracle,
                          uint32_t trials, Sampler& sampler) {
  inst.validate();
  if (trials == 0) throw ValidationError("perm: need at least one trial");
  if (inst.p <= 2 * inst.dim + 2)
    throw ValidationError("perm: p too small for dim+1 distinct nonzero points");
  std::map<uint32_t, uint32_t> votes;
  for (uint32_t trial = 0; trial < trials; trial++) {
    PermInstance b = inst;
    for (uint32_t& v : b.a) v = (uint32_t)sampler.next_below(inst.p);
    std::vector<uint32_t> xs, ys;
    for (uint32_t t = 1; t <= inst.dim + 1; t++) {
      PermInstance q = inst;
      for (size_t e = 0; e < q.a.size(); e++)
        q.a[e] = gf_add(q.a[e], gf_mul(t, b.a[e], inst.p), inst.p);
      xs.push_back(t);
      ys.push_back(oracle(q) % inst.p);
    }
    votes[lagrange_eval(xs, ys, 0, inst.p)]++;
  }
  uint32_t best = 0, best_count = 0;
  for (const auto& [value, count] : votes)
    if (count > best_count) best = value, best_count = count;
  return best;
}

CheckVerdict perm_check(const PermInstance& inst, uint32_t claimed,
                        const PermOracle& oracle, Sampler& sampler, uint32_t reps) {
  inst.validate();
  if (reps == 0) throw ValidationError("perm: need at least one repetition");
  if (claimed >= inst.p) throw ValidationError("perm: claimed value not reduced mod p");

  for (uint32_t rep = 0; rep < reps; rep++) {
    PermInstance cur = inst;
    uint32_t v = claimed;
    while (cur.dim >= 3) {
      uint32_t n = cur.dim, p = cur.p;
      uint32_t deg = (n - 1) * (n - 1);
      if (deg + 1 > p)
        throw ValidationError("perm: p too small for the line interpolation degree");

      // Minor line B(t): Lagrange mix of the first-row minors with nodes
      // 1..n, so B(j) is exactly minor j-1.
      std::vector<PermInstance> minors;
      std::vector<uint32_t> nodes;
      for (uint32_t j = 0; j < n; j++) {
        minors.push_back(cur.minor_first_row(j));
        nodes.push_back(j + 1);
      }
      auto line_at = [&](uint32_t t) {
        PermInstance q = minors[0];
        for (size_t e = 0; e < q.a.size(); e++) {
          std::vector<uint32_t> ys;
          for (uint32_t j = 0; j < n; j++) ys.push_back(minors[j].a[e]);
          q.a[e] = lagrange_eval(nodes, ys, t, p);
        }
        return q;
      };

      // The prover's polynomial along the line, reconstructed from deg+1
      // oracle answers at the points 0..deg.
      std::vector<uint32_t> xs, ys;
      for (uint32_t t = 0; t <= deg; t++) {
        xs.push_back(t);
        ys.push_back(oracle(line_at(t)) % p);
      }

      uint32_t expand = 0;
      for (uint32_t j = 0; j < n; j++)
        expand = gf_add(expand, gf_mul(cur.at(0, j), lagrange_eval(xs, ys, j + 1, p), p), p);
      if (expand != v) return CheckVerdict::kUnknown;

      uint32_t r = (uint32_t)sampler.next_below(p);
      v = lagrange_eval(xs, ys, r, p);
      cur = line_at(r);
    }
    if (perm_eval(cur) != v) return CheckVerdict::kUnknown;
  }
  return CheckVerdict::kAccept;
}

PermInstance pad_matrix(const PermInstance& inst, uint32_t new_dim) {
  inst.validate();
  if (new_dim <= inst.dim) throw ValidationError("perm: padding must increase the dimension");
  if (new_dim > 16) throw BudgetError("perm: padded dimension caps at 16");
  PermInstance out;
  out.p = inst.p;
  out.dim = new_dim;
  out.bit = inst.bit;
  out.a.assign((size_t)new_dim * new_dim, 0);
  for (uint32_t i = 0; i < inst.dim; i++)
    for (uint32_t j = 0; j < inst.dim; j++) out.at(i, j) = inst.at(i, j);
  for (uint32_t i = inst.dim; i < new_dim; i++) out.at(i, i) = 1;
  return out;
}

Bits FramedBits::bits() const {
  Bits b = core;
  b.push_back(1);
  while (b.size() < length) b.push_back(0);
  return b;
}

FramedBits frame(const Bits& core, uint8_t length) {
  if (length <= core.size()) throw ValidationError("frame: target length must exceed the core");
  return FramedBits{core, length};
}

FramedBits frame(const FramedBits& f, uint8_t length) { return frame(f.core, length); }

Bits unframe(const Bits& padded) {
  size_t i = padded.size();
  while (i > 0 && padded.get(i - 1) == 0) i--;
  if (i == 0) throw ValidationError("frame: no marker bit found");
  Bits core;
  for (size_t j = 0; j + 1 < i; j++) core.push_back(padded.get(j));
  return core;
}

}  // namespace pdlab
