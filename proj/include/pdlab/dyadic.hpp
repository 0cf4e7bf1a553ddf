#pragma once

#include <cassert>
#include <cstdint>
#include <string>

#include "pdlab/errors.hpp"

namespace pdlab {

// Exact dyadic rational num / 2^e with num >= 0. Canonical form keeps num odd
// unless the value is 0 (then num = 0, e = 0). All probability bookkeeping in
// canonical paths goes through this type; no floating point.
struct Dyadic {
  uint64_t num = 0;
  int e = 0;

  constexpr Dyadic() = default;
  Dyadic(uint64_t n, int exp) : num(n), e(exp) { normalize(); }

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }
  // 2^-k
  static Dyadic pow2_inv(int k) { return Dyadic(1, k); }
  // count / 2^k
  static Dyadic ratio(uint64_t count, int k) { return Dyadic(count, k); }

  void normalize() {
    if (num == 0) {
      e = 0;
      return;
    }
    while ((num & 1u) == 0 && e > 0) {
      num >>= 1;
      e--;
    }
  }

  bool is_zero() const { return num == 0; }

  // Shift onto a common denominator; throws instead of silently wrapping
  // because these overflows are data-driven (deep randomness trees), not bugs
  // the compiler can see. Release builds must keep the check.
  static uint64_t aligned(const Dyadic& d, int e) {
    if (e - d.e >= 64) throw InternalError("dyadic: exponent spread too wide");
    __int128 v = (__int128)d.num << (e - d.e);
    if (v > (__int128)UINT64_MAX) throw InternalError("dyadic: numerator overflow");
    return (uint64_t)v;
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    int e = a.e > b.e ? a.e : b.e;
    uint64_t na = aligned(a, e), nb = aligned(b, e);
    if (na + nb < na) throw InternalError("dyadic: sum overflow");
    return Dyadic(na + nb, e);
  }

  // |a - b|
  friend Dyadic abs_diff(const Dyadic& a, const Dyadic& b) {
    int e = a.e > b.e ? a.e : b.e;
    uint64_t na = aligned(a, e), nb = aligned(b, e);
    return Dyadic(na > nb ? na - nb : nb - na, e);
  }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.num == b.num && a.e == b.e;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    int e = a.e > b.e ? a.e : b.e;
    __int128 na = (__int128)a.num << (e - a.e > 63 ? 63 : e - a.e);
    __int128 nb = (__int128)b.num << (e - b.e > 63 ? 63 : e - b.e);
    // Saturating the shift at 63 keeps the order: the saturated side already
    // dwarfs any canonical numerator on the other side.
    if (e - a.e > 63 && a.num) return false;
    if (e - b.e > 63 && b.num) return true;
    return na < nb;
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return a < b || a == b; }

  // Exact comparison with a non-negative fraction p/q (q > 0):
  // num/2^e vs p/q  <=>  num*q vs p*2^e.
  int cmp_fraction(uint64_t p, uint64_t q) const {
    assert(q > 0);
    __int128 lhs = (__int128)num * q;
    __int128 rhs = (__int128)p << e;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }
  bool leq_fraction(uint64_t p, uint64_t q) const { return cmp_fraction(p, q) <= 0; }
  bool geq_fraction(uint64_t p, uint64_t q) const { return cmp_fraction(p, q) >= 0; }

  double to_double() const {
    double d = (double)num;
    for (int i = 0; i < e; i++) d /= 2.0;
    return d;
  }

  std::string str() const {
    return std::to_string(num) + "/2^" + std::to_string(e);
  }
};

}  // namespace pdlab
