#include "estraus/split.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace estraus {

namespace {

// Smallest a with a + b = target, a <= b, a | modulus, b | modulus.
// `fm` must be the factorization of the modulus. `buf` is scratch space.
std::optional<std::pair<u64, u64>> find_pair(u64 target, const Factorization& fm,
                                             const Factorizer& factorizer, std::vector<u64>& buf) {
  if (target < 2) return std::nullopt;
  factorizer.divisors_up_to(fm, target / 2, buf);
  const u64 modulus = fm.value;
  u64 best_a = 0;
  for (u64 a : buf) {
    const u64 b = target - a;
    if (modulus % b == 0 && (best_a == 0 || a < best_a)) best_a = a;
  }
  if (best_a == 0) return std::nullopt;
  return std::make_pair(best_a, target - best_a);
}

SplitWitness make_witness(u64 r, u64 r1, u64 a, u64 b, u64 modulus) {
  SplitWitness w;
  w.r = r;
  w.r1 = r1;
  w.a = a;
  w.b = b;
  w.d = gcd_u64(a, b);
  w.y1 = a / w.d;
  w.z1 = b / w.d;
  w.g = modulus / (a / w.d * b);  // modulus / lcm(a, b)
  return w;
}

// Shared scan: n fixed, x = base + r for r = 1..r_max, residual numerator
// 4r - 1 scaled by r1 = 1..r1_max, split over the divisors of r1 * n * x.
// First hit in (r, r1, a) order wins.
SplitOutcome scan_form(u64 index, const char* index_key, u64 n, u64 base, u64 r_max,
                       u64 r1_max, bool build_decomposition, const Factorizer& factorizer) {
  SplitOutcome out;
  out.index = index;
  out.n = n;

  Factorization fn;
  try {
    fn = factorizer.factorize(n);
  } catch (const ResourceLimitError&) {
    out.inconclusive = true;
    return out;
  }

  bool limited = false;
  std::vector<u64> buf;
  for (u64 r = 1; r <= r_max; ++r) {
    try {
      const u64 x = checked_add_u64(base, r);
      const u64 numerator = 4 * r - 1;  // == 4x - n
      const Factorization fxn = merge(factorizer.factorize(x), fn);
      Factorization scaled;
      for (u64 r1 = 1; r1 <= r1_max; ++r1) {
        const u64 target = checked_mul_u64(numerator, r1);
        if (r1 != 1) scaled = merge(factorizer.factorize(r1), fxn);
        const Factorization& fm = r1 == 1 ? fxn : scaled;
        const auto pair = find_pair(target, fm, factorizer, buf);
        if (!pair) continue;

        out.solved = true;
        out.witness = make_witness(r, r1, pair->first, pair->second, fm.value);
        if (build_decomposition) {
          const SplitWitness& w = *out.witness;
          const UnitTriple triple{x, fm.value / w.b, fm.value / w.a};
          Method method{r1 == 1 ? MethodKind::split : MethodKind::multiplier_split, 0};
          std::map<std::string, u64> params{
              {index_key, index}, {"r", w.r},   {"r1", w.r1}, {"a", w.a}, {"b", w.b},
              {"d", w.d},         {"y1", w.y1}, {"z1", w.z1}, {"g", w.g}};
          out.decomposition = Decomposition::make(n, triple, method, std::move(params));
        }
        return out;
      }
    } catch (const ResourceLimitError&) {
      limited = true;  // this r was not fully examined; keep scanning
    } catch (const OverflowError&) {
      limited = true;
    }
  }
  out.inconclusive = limited;
  return out;
}

}  // namespace

std::optional<std::pair<u64, u64>> divisor_pair_split(u64 target, u64 modulus,
                                                      const Factorizer& factorizer) {
  if (modulus == 0) throw std::invalid_argument("divisor_pair_split: modulus must be positive");
  std::vector<u64> buf;
  return find_pair(target, factorizer.factorize(modulus), factorizer, buf);
}

SplitOutcome search_l(u64 l, const Factorizer& factorizer) {
  return multiplier_search(l, 1, factorizer);
}

SplitOutcome search_m(u64 m, const Factorizer& factorizer) {
  return multiplier_search_m(m, 1, factorizer);
}

SplitOutcome multiplier_search_m(u64 m, u64 r1_max, const Factorizer& factorizer) {
  if (m == 0) throw std::invalid_argument("multiplier_search_m: m must be >= 1");
  if (r1_max == 0) throw std::invalid_argument("multiplier_search_m: r1_max must be >= 1");
  const u64 n = checked_add_u64(checked_mul_u64(4, m), 1);
  return scan_form(m, "m", n, m, checked_mul_u64(2, m), r1_max, true, factorizer);
}

SplitOutcome multiplier_search(u64 l, u64 r1_max, const Factorizer& factorizer) {
  if (l == 0) throw std::invalid_argument("multiplier_search: l must be >= 1");
  if (r1_max == 0) throw std::invalid_argument("multiplier_search: r1_max must be >= 1");
  const u64 n = checked_add_u64(checked_mul_u64(24, l), 1);
  return scan_form(l, "l", n, checked_mul_u64(6, l), checked_mul_u64(12, l), r1_max, true,
                   factorizer);
}

ExceptionSieveResult exception_sieve(u64 l_lo, u64 l_hi, const Factorizer& factorizer,
                                     unsigned parallelism,
                                     const std::function<void(const SplitOutcome&)>& progress) {
  if (l_lo == 0) throw std::invalid_argument("exception_sieve: l range starts at 1");
  if (l_hi < l_lo) throw std::invalid_argument("exception_sieve: empty l range");

  const u64 count = l_hi - l_lo + 1;
  constexpr u64 kChunk = 64;
  const u64 num_chunks = (count + kChunk - 1) / kChunk;
  unsigned workers = std::max(1u, parallelism);
  if (static_cast<u64>(workers) > num_chunks) workers = static_cast<unsigned>(num_chunks);

  ExceptionSieveResult result;
  std::mutex mu;
  std::vector<std::vector<SplitOutcome>> pending(num_chunks);
  std::vector<char> done(num_chunks, 0);
  u64 next_flush = 0;
  std::atomic<u64> next_chunk{0};
  std::exception_ptr failure;

  // Outcomes are merged strictly in chunk order, so results and the progress
  // stream never depend on how threads interleave.
  auto flush_ready = [&]() {
    while (next_flush < num_chunks && done[next_flush]) {
      for (const SplitOutcome& o : pending[next_flush]) {
        if (!o.solved) (o.inconclusive ? result.inconclusive : result.exceptions).push_back(o.index);
        if (progress) progress(o);
      }
      pending[next_flush] = {};
      ++next_flush;
    }
  };

  auto worker = [&]() {
    for (;;) {
      const u64 c = next_chunk.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) return;
      const u64 lo = l_lo + c * kChunk;
      const u64 hi = std::min(l_hi, lo + kChunk - 1);
      std::vector<SplitOutcome> outs;
      outs.reserve(hi - lo + 1);
      try {
        for (u64 l = lo; l <= hi; ++l) {
          outs.push_back(scan_form(l, "l", 24 * l + 1, 6 * l, 12 * l, 1, false, factorizer));
        }
      } catch (...) {
        std::lock_guard<std::mutex> g(mu);
        if (!failure) failure = std::current_exception();
        done[c] = 1;
        continue;
      }
      std::lock_guard<std::mutex> g(mu);
      pending[c] = std::move(outs);
      done[c] = 1;
      flush_ready();
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  flush_ready();
  return result;
}

}  // namespace estraus
