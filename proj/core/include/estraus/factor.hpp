#pragma once

#include <utility>
#include <vector>

#include "estraus/arith.hpp"

namespace estraus {

// Prime factorization of `value`, factors ascending, exponents >= 1.
// value 1 has an empty factor list.
struct Factorization {
  u64 value = 1;
  std::vector<std::pair<u64, u32>> factors;

  u64 divisor_count_capped(u64 cap) const noexcept;  // min(cap, product of (e+1))
};

// Product of the two factored values.
Factorization merge(const Factorization& a, const Factorization& b);

struct FactorBudget {
  u64 rho_iterations = 1u << 22;  // Brent cycle steps before giving up
  u64 divisor_cap = 1'000'000;    // most divisors a single enumeration may emit
};

// Factoring engine: a smallest-prime-factor table for values below
// `spf_limit`, trial division by tabulated primes, then Brent's variant of
// Pollard's rho. Immutable after construction and safe to share across
// threads. Rho is seeded from (seed, value), so results and work are
// reproducible per call.
class Factorizer {
 public:
  static constexpr u32 kDefaultSpfLimit = 1u << 20;

  explicit Factorizer(u32 spf_limit = kDefaultSpfLimit, FactorBudget budget = {}, u64 seed = 1);

  // Throws ResourceLimitError when the rho budget runs out.
  Factorization factorize(u64 n) const;

  // All divisors, ascending. Throws ResourceLimitError past budget.divisor_cap.
  std::vector<u64> divisors(const Factorization& f) const;

  // Divisors <= bound, written to `out` (cleared first) in no particular
  // order. The enumeration prunes at `bound`, so the cap applies to emitted
  // divisors, not to the full divisor count.
  void divisors_up_to(const Factorization& f, u64 bound, std::vector<u64>& out) const;

  const FactorBudget& budget() const noexcept { return budget_; }
  u32 spf_limit() const noexcept { return spf_limit_; }

 private:
  u64 rho_find_factor(u64 n) const;  // one nontrivial factor of composite odd n

  u32 spf_limit_;
  FactorBudget budget_;
  u64 seed_;
  std::vector<u32> spf_;
  std::vector<u32> trial_primes_;
};

// Shared engine with default limits, built on first use.
const Factorizer& default_factorizer();

}  // namespace estraus
