#include "estraus/factor.hpp"

#include <algorithm>

#include "estraus/primality.hpp"

namespace estraus {

u64 Factorization::divisor_count_capped(u64 cap) const noexcept {
  u64 count = 1;
  for (const auto& [p, e] : factors) {
    count *= (e + 1);
    if (count >= cap) return cap;
  }
  return count;
}

Factorization merge(const Factorization& a, const Factorization& b) {
  Factorization r;
  r.value = checked_mul_u64(a.value, b.value);
  r.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      r.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
      r.factors.push_back(b.factors[j++]);
    } else {
      r.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
      ++i, ++j;
    }
  }
  return r;
}

Factorizer::Factorizer(u32 spf_limit, FactorBudget budget, u64 seed)
    : spf_limit_(std::max<u32>(spf_limit, 4)), budget_(budget), seed_(seed) {
  spf_.resize(spf_limit_);
  for (u32 i = 0; i < spf_limit_; ++i) spf_[i] = i;
  for (u64 i = 2; i * i < spf_limit_; ++i) {
    if (spf_[i] == i) {
      for (u64 j = i * i; j < spf_limit_; j += i) {
        if (spf_[j] == static_cast<u32>(j)) spf_[j] = static_cast<u32>(i);
      }
    }
  }
  for (u32 i = 2; i < spf_limit_; ++i) {
    if (spf_[i] == i) trial_primes_.push_back(i);
  }
}

namespace {

u64 rho_mix(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

// Brent's cycle-finding rho with batched gcds. n odd composite, not a prime
// power small enough for trial division.
u64 Factorizer::rho_find_factor(u64 n) const {
  u64 state = seed_ ^ (n * 0xd1342543de82ef95ULL);
  u64 spent = 0;
  while (spent < budget_.rho_iterations) {
    const u64 c = rho_mix(state) % (n - 1) + 1;
    u64 y = rho_mix(state) % n;
    u64 g = 1, q = 1, x = 0, ys = 0;
    const u64 m = 128;
    for (u64 r = 1; g == 1 && spent < budget_.rho_iterations; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = static_cast<u64>((static_cast<u128>(y) * y + c) % n);
      for (u64 k = 0; k < r && g == 1 && spent < budget_.rho_iterations; k += m) {
        ys = y;
        const u64 lim = std::min(m, r - k);
        for (u64 i = 0; i < lim; ++i) {
          y = static_cast<u64>((static_cast<u128>(y) * y + c) % n);
          q = static_cast<u64>(static_cast<u128>(q) * (x > y ? x - y : y - x) % n);
        }
        g = gcd_u64(q, n);
        spent += lim;
      }
    }
    if (g == n) {
      // Batch overshot; retrace single steps from the last checkpoint.
      g = 1;
      while (g == 1) {
        ys = static_cast<u64>((static_cast<u128>(ys) * ys + c) % n);
        g = gcd_u64(x > ys ? x - ys : ys - x, n);
      }
    }
    if (g != n && g != 1) return g;
  }
  throw ResourceLimitError("factor budget exhausted for " + std::to_string(n));
}

Factorization Factorizer::factorize(u64 n) const {
  Factorization out;
  out.value = n;
  if (n <= 1) return out;

  auto push = [&out](u64 p, u32 e) {
    out.factors.emplace_back(p, e);
  };

  // Fast path: full reduction through the table.
  if (n < spf_limit_) {
    u32 v = static_cast<u32>(n);
    while (v > 1) {
      u32 p = spf_[v], e = 0;
      while (v % p == 0) v /= p, ++e;
      push(p, e);
    }
    return out;
  }

  u64 rem = n;
  for (u32 p : trial_primes_) {
    if (static_cast<u64>(p) * p > rem) break;
    if (rem % p == 0) {
      u32 e = 0;
      while (rem % p == 0) rem /= p, ++e;
      push(p, e);
    }
  }
  if (rem == 1) {
    std::sort(out.factors.begin(), out.factors.end());
    return out;
  }
  if (rem < static_cast<u64>(spf_limit_) * spf_limit_ || is_prime(rem)) {
    // Below the square of the trial bound the remainder must be prime.
    push(rem, 1);
    std::sort(out.factors.begin(), out.factors.end());
    return out;
  }

  // rem is composite with no factor below spf_limit_: split recursively.
  std::vector<u64> stack{rem};
  while (!stack.empty()) {
    u64 v = stack.back();
    stack.pop_back();
    if (is_prime(v)) {
      push(v, 1);
      continue;
    }
    u64 g = rho_find_factor(v);
    stack.push_back(g);
    stack.push_back(v / g);
  }
  std::sort(out.factors.begin(), out.factors.end());
  // Merge duplicate primes produced by independent splits.
  std::vector<std::pair<u64, u32>> merged;
  for (const auto& [p, e] : out.factors) {
    if (!merged.empty() && merged.back().first == p) {
      merged.back().second += e;
    } else {
      merged.emplace_back(p, e);
    }
  }
  out.factors = std::move(merged);
  return out;
}

std::vector<u64> Factorizer::divisors(const Factorization& f) const {
  if (f.divisor_count_capped(budget_.divisor_cap + 1) > budget_.divisor_cap) {
    throw ResourceLimitError("divisor cap exceeded for " + std::to_string(f.value));
  }
  std::vector<u64> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t n = out.size();
    u64 pe = 1;
    for (u32 i = 0; i < e; ++i) {
      pe = checked_mul_u64(pe, p);
      for (std::size_t j = 0; j < n; ++j) out.push_back(checked_mul_u64(out[j], pe));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Factorizer::divisors_up_to(const Factorization& f, u64 bound, std::vector<u64>& out) const {
  out.clear();
  out.push_back(1);
  if (bound == 0) {
    out.clear();
    return;
  }
  for (const auto& [p, e] : f.factors) {
    const std::size_t n = out.size();
    u64 pe = 1;
    for (u32 i = 0; i < e; ++i) {
      if (pe > bound / p) break;
      pe *= p;
      for (std::size_t j = 0; j < n; ++j) {
        if (out[j] <= bound / pe) {
          out.push_back(out[j] * pe);
          if (out.size() > budget_.divisor_cap) {
            throw ResourceLimitError("divisor cap exceeded for " + std::to_string(f.value));
          }
        }
      }
    }
  }
}

const Factorizer& default_factorizer() {
  static const Factorizer instance;
  return instance;
}

}  // namespace estraus
