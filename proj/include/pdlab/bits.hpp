#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <string_view>

namespace pdlab {

// Packed bit string, at most 64 bits. Bit i is the i-th emitted/consumed bit;
// the string reads left to right, so bit 0 is the leftmost character of str().
struct Bits {
  uint64_t w = 0;
  uint8_t n = 0;

  constexpr Bits() = default;
  constexpr Bits(uint64_t word, uint8_t len) : w(word), n(len) { assert(len <= 64); }

  static Bits parse(std::string_view s) {
    Bits b;
    for (char c : s) {
      assert(c == '0' || c == '1');
      b.push_back(c == '1');
    }
    return b;
  }

  constexpr int get(size_t i) const { return (w >> i) & 1u; }
  constexpr void push_back(bool bit) {
    assert(n < 64);
    w |= (uint64_t)(bit ? 1 : 0) << n;
    n++;
  }
  constexpr size_t size() const { return n; }
  constexpr bool empty() const { return n == 0; }

  std::string str() const {
    std::string s(n, '0');
    for (size_t i = 0; i < n; i++) s[i] = get(i) ? '1' : '0';
    return s;
  }

  // True if *this is a prefix of b.
  bool prefix_of(const Bits& b) const {
    if (n > b.n) return false;
    uint64_t mask = n == 64 ? ~0ull : ((1ull << n) - 1);
    return (w & mask) == (b.w & mask);
  }

  friend bool operator==(const Bits& a, const Bits& b) {
    if (a.n != b.n) return false;
    uint64_t mask = a.n == 64 ? ~0ull : ((1ull << a.n) - 1);
    return (a.w & mask) == (b.w & mask);
  }
  friend bool operator!=(const Bits& a, const Bits& b) { return !(a == b); }

  // Shortlex order: by length, then by string value (leftmost bit most
  // significant for the comparison so "01" < "10").
  friend bool operator<(const Bits& a, const Bits& b) {
    if (a.n != b.n) return a.n < b.n;
    for (size_t i = 0; i < a.n; i++)
      if (a.get(i) != b.get(i)) return a.get(i) < b.get(i);
    return false;
  }
};

// Value of the string read MSB-first ("110" -> 6). Used for integer views of
// generator outputs; no leading-1 requirement.
inline uint64_t msb_first_value(const Bits& b) {
  uint64_t v = 0;
  for (size_t i = 0; i < b.size(); i++) v = (v << 1) | (uint64_t)b.get(i);
  return v;
}

inline Bits from_msb_value(uint64_t v, uint8_t n) {
  Bits b;
  for (int i = n - 1; i >= 0; i--) b.push_back((v >> i) & 1u);
  return b;
}

// ceil(log2(t)) for t >= 1.
inline int ceil_log2(uint64_t t) {
  assert(t >= 1);
  int e = 0;
  uint64_t p = 1;
  while (p < t) {
    p <<= 1;
    e++;
  }
  return e;
}

}  // namespace pdlab
