#include "pdlab/primes.hpp"

#include <vector>

#include "pdlab/errors.hpp"
#include "pdlab/lk.hpp"
#include "pdlab/manifest.hpp"

namespace pdlab {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// n-bit prefix of the generator output, most significant bit first
uint64_t prefix_value(const Bits& out, uint32_t n) {
  uint64_t v = 0;
  for (uint32_t i = 0; i < n; i++) v = (v << 1) | (uint64_t)out.get(i);
  return v;
}

NWGenerator expand_config(const GeneratorConfig& cfg, uint32_t n) {
  if (n < 1 || n > 64) throw BudgetError("primes: n outside [1, 64]");
  NWGenerator g = generator_from_config(cfg);
  if (g.seed_length() > 24) throw BudgetError("primes: seed space over 2^24");
  if (g.output_length() < n)
    throw ValidationError("primes: generator emits fewer than n bits");
  return g;
}

}  // namespace

bool is_prime(uint64_t v) {
  if (v < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    if (v == p) return true;
    if (v % p == 0) return false;
  }
  uint64_t d = v - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, s++;
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                     29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; i++) {
      x = mulmod(x, x, v);
      if (x == v - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

void SuccinctPrime::validate() const {
  NWGenerator g = expand_config(gen, n);
  if (seed.size() != g.seed_length())
    throw ValidationError("succinct prime: seed length off");
  Bits out = nw_generate(g, seed);
  if (prefix_value(out, n) != prime)
    throw ValidationError("succinct prime: seed does not expand to the prime");
  if (!is_prime(prime)) throw ValidationError("succinct prime: value is composite");
}

std::optional<SuccinctPrime> find_prime_via_prg(const GeneratorConfig& cfg, uint32_t n) {
  NWGenerator g = expand_config(cfg, n);
  const uint32_t ell = g.seed_length();
  for (uint64_t v = 0; v < (1ull << ell); v++) {
    Bits seed = from_msb_value(v, (uint8_t)ell);
    uint64_t p = prefix_value(nw_generate(g, seed), n);
    if (!is_prime(p)) continue;
    SuccinctPrime sp{seed, p, n, cfg};
    sp.validate();
    return sp;
  }
  return std::nullopt;
}

SeedRateReport random_seed_prime(uint32_t n, uint64_t trials, Sampler& sampler,
                                 const GeneratorConfig& cfg, int fixed_advice) {
  SeedRateReport rep;
  rep.n = n;
  rep.trials = trials;
  auto target = find_prime_via_prg(cfg, n);
  if (!target) return rep;
  rep.applicable = true;
  rep.target = target->prime;
  NWGenerator g = expand_config(cfg, n);
  rep.ell = g.seed_length();
  rep.bound = Dyadic(1, fixed_advice < 0 ? rep.ell + 1 : rep.ell);
  for (uint64_t i = 0; i < trials; i++) {
    int advice = fixed_advice < 0 ? sampler.next_bit() : (fixed_advice & 1);
    Bits seed = sampler.next_bits((uint8_t)rep.ell);
    if (advice != 1) continue;  // the advice-0 branch never outputs the target
    if (prefix_value(nw_generate(g, seed), n) == target->prime) rep.hits++;
  }
  return rep;
}

PrimeWitness rk_poly_prime_witness(const SuccinctPrime& sp) {
  sp.validate();
  if (sp.gen.kind != GeneratorConfig::Kind::kIdentity)
    throw ValidationError("prime witness: only the identity pipeline is a toy program");
  // echo the seed: RDI; BRF+2; OUT0; JMP 0; OUT1; JMP 0, cut after n bits
  PrimeWitness w;
  w.machine = Program::assemble({{Op::kRdi, 0},
                                 {Op::kBrf, 2},
                                 {Op::kOut0, 0},
                                 {Op::kJmp, 0},
                                 {Op::kOut1, 0},
                                 {Op::kJmp, 0}});
  w.aux = sp.seed;
  w.t = 4 * sp.n - 1;
  w.cost = (uint32_t)(w.machine.size_bits() + w.aux.size());
  w.bound = (uint32_t)(sp.seed.size() + manifest().fact51_c0);
  RunResult rr = exec_program_fn(w.machine, w.aux, w.t, [](uint32_t) { return 0; });
  if (prefix_value(rr.output, sp.n) != sp.prime || rr.output.size() != sp.n)
    throw InternalError("prime witness: replay mismatch");
  if (w.cost > w.bound) throw InternalError("prime witness: cost over bound");
  return w;
}

PrimeDensity prime_density(uint32_t n) {
  if (n < 2 || n > 24) throw BudgetError("prime density: n outside [2, 24]");
  const uint64_t total = 1ull << n;
  std::vector<uint8_t> composite(total, 0);
  uint64_t count = 0;
  for (uint64_t v = 2; v < total; v++) {
    if (composite[v]) continue;
    count++;
    for (uint64_t w = v * v; w < total; w += v) composite[w] = 1;
  }
  return PrimeDensity{n, count, total};
}

}  // namespace pdlab
