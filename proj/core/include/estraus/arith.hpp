#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

// Exact unsigned arithmetic for the solver.
//
// Every quantity the solver stores fits in 64 bits; intermediate products in
// the verification identity n*(xy+yz+zx) = 4xyz need up to 256 bits and are
// computed with fixed-width extended arithmetic below. Nothing here wraps
// silently: operations that could exceed the supported width either use a
// wider result type or throw OverflowError.

namespace estraus {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// A width-limited operation would have produced a value that does not fit.
class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// A configured work budget (factoring iterations, divisor cap, ...) ran out.
class ResourceLimitError : public std::runtime_error {
 public:
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

inline u64 checked_mul_u64(u64 a, u64 b) {
  u128 p = static_cast<u128>(a) * b;
  if (p >> 64) throw OverflowError("u64 multiply overflow");
  return static_cast<u64>(p);
}

inline u64 checked_add_u64(u64 a, u64 b) {
  u64 s = a + b;
  if (s < a) throw OverflowError("u64 add overflow");
  return s;
}

inline u128 checked_mul_u128(u128 a, u128 b) {
  if (a != 0 && b > static_cast<u128>(-1) / a) throw OverflowError("u128 multiply overflow");
  return a * b;
}

inline u128 checked_add_u128(u128 a, u128 b) {
  u128 s = a + b;
  if (s < a) throw OverflowError("u128 add overflow");
  return s;
}

constexpr u64 gcd_u64(u64 a, u64 b) noexcept {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr u128 gcd_u128(u128 a, u128 b) noexcept {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// 256-bit unsigned value as four 64-bit limbs, little-endian. Just enough
// surface for exact comparison of the verification identity's two sides.
struct U256 {
  u64 limb[4] = {0, 0, 0, 0};

  static U256 from_u128(u128 v) {
    U256 r;
    r.limb[0] = static_cast<u64>(v);
    r.limb[1] = static_cast<u64>(v >> 64);
    return r;
  }

  // Throws OverflowError if the true sum needs a fifth limb.
  U256 add(const U256& o) const {
    U256 r;
    u64 carry = 0;
    for (int i = 0; i < 4; ++i) {
      u128 s = static_cast<u128>(limb[i]) + o.limb[i] + carry;
      r.limb[i] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    if (carry) throw OverflowError("u256 add overflow");
    return r;
  }

  // this * m, m a 64-bit factor. Throws OverflowError past 256 bits.
  U256 mul_u64(u64 m) const {
    U256 r;
    u64 carry = 0;
    for (int i = 0; i < 4; ++i) {
      u128 s = static_cast<u128>(limb[i]) * m + carry;
      r.limb[i] = static_cast<u64>(s);
      carry = static_cast<u64>(s >> 64);
    }
    if (carry) throw OverflowError("u256 multiply overflow");
    return r;
  }

  bool operator==(const U256& o) const {
    for (int i = 0; i < 4; ++i)
      if (limb[i] != o.limb[i]) return false;
    return true;
  }
};

// u128 * u128 -> U256, exact.
inline U256 mul_u128_full(u128 a, u128 b) {
  u64 a0 = static_cast<u64>(a), a1 = static_cast<u64>(a >> 64);
  u64 b0 = static_cast<u64>(b), b1 = static_cast<u64>(b >> 64);
  u128 p00 = static_cast<u128>(a0) * b0;
  u128 p01 = static_cast<u128>(a0) * b1;
  u128 p10 = static_cast<u128>(a1) * b0;
  u128 p11 = static_cast<u128>(a1) * b1;

  U256 r;
  r.limb[0] = static_cast<u64>(p00);
  u128 mid = (p00 >> 64);
  mid += static_cast<u64>(p01);
  mid += static_cast<u64>(p10);
  r.limb[1] = static_cast<u64>(mid);
  u128 hi = (mid >> 64) + (p01 >> 64) + (p10 >> 64) + static_cast<u64>(p11);
  r.limb[2] = static_cast<u64>(hi);
  r.limb[3] = static_cast<u64>((hi >> 64) + (p11 >> 64));
  return r;
}

std::string to_string_u128(u128 v);

}  // namespace estraus
