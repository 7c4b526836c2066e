#include "estraus/oracle.hpp"

#include <stdexcept>
#include <string>

namespace estraus {

OracleResult enumerate_all(u64 n, std::optional<u64> max_solutions) {
  OracleResult out;
  out.n = n;
  const XBounds xb = x_bounds(n);  // throws for n < 2
  for (u64 x = xb.lo; x <= xb.hi; ++x) {
    // 4/n - 1/x = (4x - n)/(n x), positive because x > n/4.
    const u64 num0 = 4 * x - n;
    const u128 den0 = static_cast<u128>(n) * x;
    const u64 g = static_cast<u64>(gcd_u128(num0, den0));
    const u64 num = num0 / g;
    const u128 den = den0 / g;

    // 1/y < num/den (so z stays positive) and num/den <= 2/y (so z >= y can
    // still hold); hence den/num < y <= 2*den/num.
    u128 y_lo = den / num + 1;
    if (y_lo < x) y_lo = x;
    const u128 y_hi = 2 * den / num;
    for (u128 y = y_lo; y <= y_hi; ++y) {
      const u128 t = static_cast<u128>(num) * y - den;
      const u128 zy = checked_mul_u128(den, y);
      if (zy % t != 0) continue;
      const u128 z = zy / t;
      if (z < y) continue;
      if ((y >> 64) || (z >> 64)) {
        throw OverflowError("oracle: solution component exceeds 64 bits for n=" +
                            std::to_string(n));
      }
      if (max_solutions && out.solutions.size() >= *max_solutions) {
        out.exhausted = false;  // one more exists beyond the cap
        return out;
      }
      out.solutions.push_back(UnitTriple{x, static_cast<u64>(y), static_cast<u64>(z)});
    }
  }
  return out;
}

u64 count_solutions(u64 n) { return static_cast<u64>(enumerate_all(n).solutions.size()); }

}  // namespace estraus
