#pragma once

#include <optional>
#include <vector>

#include "estraus/triple.hpp"

namespace estraus {

// Brute-force ground truth: every canonical solution of 4/n = 1/x+1/y+1/z.

struct OracleResult {
  u64 n = 0;
  std::vector<UnitTriple> solutions;  // canonical, lexicographically ascending
  bool exhausted = true;              // false iff truncated by max_solutions
};

// Enumerates all canonical triples: x runs over x_bounds(n); for each x the
// residual 4/n - 1/x = num/den (lowest terms) fixes y in
// [max(x, floor(den/num)+1), floor(2*den/num)] and z = den*y/(num*y - den)
// when that division is exact and z >= y. The y window is forced by
// 0 < 1/y < num/den <= 2/y, so the scan is complete. Intermediates use
// 128-bit arithmetic; a solution component beyond 64 bits (possible once n
// is around 10^5 or larger) raises OverflowError rather than being dropped.
OracleResult enumerate_all(u64 n, std::optional<u64> max_solutions = std::nullopt);

// |enumerate_all(n).solutions| without truncation.
u64 count_solutions(u64 n);

}  // namespace estraus
