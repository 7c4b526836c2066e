#include "estraus/parametric.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "estraus/factor.hpp"
#include "estraus/identity.hpp"

namespace estraus {

UnitTriple ParametricWitness::triple() const {
  return UnitTriple{checked_mul_u64(u5, p), checked_mul_u64(v4, p), w3};
}

Decomposition ParametricWitness::decomposition() const {
  std::map<std::string, u64> params{{"w5", w5}, {"u5", u5}, {"w2", w2},
                                    {"v4", v4}, {"w3", w3}, {"w4", w4}};
  if (w6) params["w6"] = *w6;
  if (w7) params["w7"] = *w7;
  return Decomposition::make(p, triple(), Method{MethodKind::parametric, 0}, std::move(params));
}

std::vector<Decomposition> case2_forms(u64 p) {
  if (p < 3 || p % 4 != 3) {
    throw std::invalid_argument("case2_forms: need p = 3 (mod 4), got " + std::to_string(p));
  }
  return {apply_family(25, p), apply_family(26, p), apply_family(27, p)};
}

std::optional<ParametricWitness> parametric_step(u64 p, u64 w5, u64 u5) {
  if (p % 4 != 1) {
    throw std::invalid_argument("parametric_step: need p = 1 (mod 4), got " + std::to_string(p));
  }
  if (u5 == 0) throw std::invalid_argument("parametric_step: u5 must be >= 1");

  const u128 w4 = 4 * static_cast<u128>(w5) + 3;
  const u128 quarter = (static_cast<u128>(p) + 3) / 4;
  const u128 lhs = checked_mul_u128(w4, u5);
  const u128 rhs = quarter + w5;
  if (lhs <= rhs) return std::nullopt;  // denominator not positive
  const u128 denom = lhs - rhs;
  const u128 u5_sq = static_cast<u128>(u5) * u5;
  if (u5_sq % denom != 0) return std::nullopt;

  const u128 w2 = u5_sq / denom;
  const u128 v4 = checked_mul_u128(w4, w2) - u5;  // = u5*(quarter + w5)/denom > 0
  const u128 w3 = w5 + quarter;

  auto narrow = [](u128 v, const char* what) {
    if (v >> 64) throw OverflowError(std::string("parametric witness field too wide: ") + what);
    return static_cast<u64>(v);
  };
  ParametricWitness w;
  w.p = p;
  w.w5 = w5;
  w.u5 = u5;
  w.w2 = narrow(w2, "w2");
  w.v4 = narrow(v4, "v4");
  w.w3 = narrow(w3, "w3");
  w.w4 = narrow(w4, "w4");
  return w;
}

std::vector<ParametricWitness> parametric_search(u64 p, u64 w5_max, u64 u5_max) {
  if (p % 4 != 1) {
    throw std::invalid_argument("parametric_search: need p = 1 (mod 4), got " + std::to_string(p));
  }
  std::vector<ParametricWitness> hits;
  const u64 quarter = static_cast<u64>((static_cast<u128>(p) + 3) / 4);
  for (u64 w5 = 0; w5 <= w5_max; ++w5) {
    const u64 w4 = checked_add_u64(checked_mul_u64(4, w5), 3);
    // denom > 0 needs u5 > (w5 + (p+3)/4) / w4; smaller u5 can't hit.
    const u64 lower = checked_add_u64(w5, quarter) / w4;
    for (u64 u5 = lower + 1; u5 <= u5_max; ++u5) {
      if (auto w = parametric_step(p, w5, u5)) hits.push_back(*w);
    }
  }
  return hits;
}

std::optional<ParametricWitness> parametric_first(u64 p, u64 w5_max, u64 u5_max) {
  if (p % 4 != 1) {
    throw std::invalid_argument("parametric_first: need p = 1 (mod 4), got " + std::to_string(p));
  }
  const u64 quarter = static_cast<u64>((static_cast<u128>(p) + 3) / 4);
  for (u64 w5 = 0; w5 <= w5_max; ++w5) {
    const u64 w4 = checked_add_u64(checked_mul_u64(4, w5), 3);
    const u64 lower = checked_add_u64(w5, quarter) / w4;
    for (u64 u5 = lower + 1; u5 <= u5_max; ++u5) {
      if (auto w = parametric_step(p, w5, u5)) return w;
    }
  }
  return std::nullopt;
}

std::vector<CorollaryFamily> corollary_families(u64 u5_max) {
  if (u5_max == 0) throw std::invalid_argument("corollary_families: u5_max must be >= 1");
  std::vector<CorollaryFamily> out;
  out.reserve(static_cast<std::size_t>(u5_max));
  for (u64 u5 = 1; u5 <= u5_max; ++u5) {
    // p = 4*(u5*(4*w6 - u5 - 1) - w6) + 1 = slope*w6 + w6_offset.
    CorollaryFamily f;
    f.u5 = u5;
    f.slope = checked_mul_u64(16, u5) - 4;
    const u64 drop = checked_add_u64(checked_mul_u64(checked_mul_u64(4, u5), u5),
                                     checked_mul_u64(4, u5)) -
                     1;  // 4*u5^2 + 4*u5 - 1
    if (drop > static_cast<u64>(std::numeric_limits<i64>::max())) {
      throw OverflowError("corollary_families: offset out of i64 range");
    }
    f.w6_offset = -static_cast<i64>(drop);
    f.w7_offset = f.slope - drop % f.slope;  // drop % slope != 0: slope is even, drop is odd
    out.push_back(f);
  }
  return out;
}

std::vector<Case3Entry> case3_primes_from(u64 u5, u64 v4) {
  if (u5 == 0 || v4 == 0) {
    throw std::invalid_argument("case3_primes_from: u5 and v4 must be >= 1");
  }
  const u64 sum = checked_add_u64(u5, v4);
  const u64 prod = checked_mul_u64(u5, v4);
  const u64 common = gcd_u64(sum, prod);
  std::vector<Case3Entry> out;
  for (u64 w2 : default_factorizer().divisors(default_factorizer().factorize(common))) {
    Case3Entry e;
    e.w2 = w2;
    e.w3 = prod / w2;
    e.w4 = sum / w2;
    const u64 four_w3 = checked_mul_u64(4, e.w3);
    if (four_w3 <= e.w4) continue;  // p would not be positive
    e.p = four_w3 - e.w4;
    out.push_back(e);
  }
  return out;
}

}  // namespace estraus
