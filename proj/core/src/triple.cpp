#include "estraus/triple.hpp"

#include <algorithm>
#include <stdexcept>

namespace estraus {

bool verify_triple(u64 n, const UnitTriple& t) noexcept {
  if (n == 0 || t.x == 0 || t.y == 0 || t.z == 0) return false;
  const u128 xy = static_cast<u128>(t.x) * t.y;
  const u128 yz = static_cast<u128>(t.y) * t.z;
  const u128 zx = static_cast<u128>(t.z) * t.x;
  // xy + yz + zx can exceed 128 bits; keep everything in 256-bit limbs.
  const U256 sum = U256::from_u128(xy).add(U256::from_u128(yz)).add(U256::from_u128(zx));
  const U256 lhs = sum.mul_u64(n);
  const U256 rhs = mul_u128_full(static_cast<u128>(4) * t.x, yz);
  return lhs == rhs;
}

UnitTriple canonicalize(UnitTriple t) noexcept {
  if (t.x > t.y) std::swap(t.x, t.y);
  if (t.y > t.z) std::swap(t.y, t.z);
  if (t.x > t.y) std::swap(t.x, t.y);
  return t;
}

XBounds x_bounds(u64 n) {
  if (n < 2) throw std::invalid_argument("x_bounds requires n >= 2");
  return {n / 4 + 1, 3 * n / 4};
}

std::string to_string(MethodKind k) {
  switch (k) {
    case MethodKind::identity:
      return "identity";
    case MethodKind::split:
      return "split";
    case MethodKind::multiplier_split:
      return "multiplier-split";
    case MethodKind::parametric:
      return "parametric";
    case MethodKind::corollary:
      return "corollary";
    case MethodKind::oracle:
      return "oracle";
    case MethodKind::manual:
      return "manual";
  }
  return "manual";
}

std::string to_string(const Method& m) {
  if (m.kind == MethodKind::identity) return "identity:F" + std::to_string(m.family);
  return to_string(m.kind);
}

std::optional<Method> method_from_string(std::string_view s) {
  if (s.rfind("identity:F", 0) == 0) {
    int fam = 0;
    for (char c : s.substr(10)) {
      if (c < '0' || c > '9') return std::nullopt;
      fam = fam * 10 + (c - '0');
    }
    if (fam < 1 || fam > 31) return std::nullopt;
    return Method{MethodKind::identity, fam};
  }
  if (s == "split") return Method{MethodKind::split, 0};
  if (s == "multiplier-split") return Method{MethodKind::multiplier_split, 0};
  if (s == "parametric") return Method{MethodKind::parametric, 0};
  if (s == "corollary") return Method{MethodKind::corollary, 0};
  if (s == "oracle") return Method{MethodKind::oracle, 0};
  if (s == "manual") return Method{MethodKind::manual, 0};
  return std::nullopt;
}

Decomposition Decomposition::make(u64 n, UnitTriple t, Method m, std::map<std::string, u64> params) {
  if (!verify_triple(n, t)) {
    throw VerificationError("triple (" + std::to_string(t.x) + "," + std::to_string(t.y) + "," +
                            std::to_string(t.z) + ") does not solve 4/" + std::to_string(n));
  }
  Decomposition d;
  d.n = n;
  d.triple = t;
  d.method = m;
  d.params = std::move(params);
  return d;
}

}  // namespace estraus
