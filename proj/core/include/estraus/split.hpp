#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "estraus/factor.hpp"
#include "estraus/triple.hpp"

namespace estraus {

// Searches built on splitting the numerator of
//   r1 * (4/n - 1/x) = r1 * (4x - n) / (n x)
// into two divisors of r1 * n * x. With n = 24l + 1 and x = 6l + r the
// numerator 4x - n is exactly 4r - 1; likewise for n = 4m + 1, x = m + r.

// Split witness: a + b = (4r - 1) * r1 with a <= b, both dividing
// r1 * n * x. Writing d = gcd(a, b), a = d*y1, b = d*z1 and
// g = r1*n*x / (d*y1*z1), the solution is y = g*y1, z = g*z1.
struct SplitWitness {
  u64 r = 0;
  u64 r1 = 1;
  u64 a = 0, b = 0;
  u64 d = 0, y1 = 0, z1 = 0, g = 0;
};

struct SplitOutcome {
  u64 index = 0;  // the l (or m) that was searched
  u64 n = 0;
  bool solved = false;
  // A factor-budget limit prevented examining some r before any hit: the
  // range was not exhausted, so "unsolved" would be unsound.
  bool inconclusive = false;
  std::optional<SplitWitness> witness;
  std::optional<Decomposition> decomposition;
};

// Smallest-a pair (a, b): a + b = target, a <= b, a | modulus, b | modulus.
std::optional<std::pair<u64, u64>> divisor_pair_split(
    u64 target, u64 modulus, const Factorizer& factorizer = default_factorizer());

// n = 24l + 1; tries r = 1..12l in order, first hit wins (method "split").
SplitOutcome search_l(u64 l, const Factorizer& factorizer = default_factorizer());

// n = 4m + 1; tries r = 1..2m with x = m + r (method "split").
SplitOutcome search_m(u64 m, const Factorizer& factorizer = default_factorizer());

// As search_l but scales each residual by r1 = 1..r1_max before splitting;
// deterministic order: ascending r, then r1, then a. A hit with r1 = 1 is a
// plain split, so multiplier_search with r1_max = 1 behaves exactly like
// search_l; hits with r1 >= 2 get method "multiplier-split".
SplitOutcome multiplier_search(u64 l, u64 r1_max, const Factorizer& factorizer = default_factorizer());

// The same scaled scan over the n = 4m + 1 form (multiplier_search_m(m, 1)
// behaves exactly like search_m).
SplitOutcome multiplier_search_m(u64 m, u64 r1_max, const Factorizer& factorizer = default_factorizer());

struct ExceptionSieveResult {
  std::vector<u64> exceptions;    // l with no split solution for any r
  std::vector<u64> inconclusive;  // l whose scan hit a resource limit
};

// Runs search_l over [l_lo, l_hi]. Work may be partitioned across
// `parallelism` threads; outcomes are merged back in l order, so the result
// and the progress stream are independent of the partitioning. The progress
// callback, when set, receives every outcome in ascending l order.
ExceptionSieveResult exception_sieve(
    u64 l_lo, u64 l_hi, const Factorizer& factorizer = default_factorizer(),
    unsigned parallelism = 1,
    const std::function<void(const SplitOutcome&)>& progress = nullptr);

}  // namespace estraus
