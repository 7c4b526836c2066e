// Microbenchmarks for the hot paths: factorization, divisor-pair splitting,
// the staged solver, and the exhaustive oracle. Shared engines are built once
// so the loops measure the operation, not construction.
#include <benchmark/benchmark.h>

#include "estraus/factor.hpp"
#include "estraus/oracle.hpp"
#include "estraus/parametric.hpp"
#include "estraus/pipeline.hpp"
#include "estraus/split.hpp"
#include "estraus/triple.hpp"

using namespace estraus;

namespace {

const Factorizer& engine() {
  static const Factorizer fz;
  return fz;
}

const Pipeline& solver() {
  static const Pipeline pipe;
  return pipe;
}

void BM_factorize_table(benchmark::State& state) {
  const Factorizer& fz = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fz.factorize(360360));
  }
}
BENCHMARK(BM_factorize_table);

void BM_factorize_rho_semiprime(benchmark::State& state) {
  const Factorizer& fz = engine();
  // Two 31-bit primes: beyond the factor table and trial primes, lands on rho.
  const u64 n = 2147483647ULL * 2147483629ULL;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fz.factorize(n));
  }
}
BENCHMARK(BM_factorize_rho_semiprime);

void BM_divisors(benchmark::State& state) {
  const Factorizer& fz = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fz.divisors(fz.factorize(720720)));
  }
}
BENCHMARK(BM_divisors);

void BM_divisor_pair_split(benchmark::State& state) {
  const Factorizer& fz = engine();
  // The l = 17 cell (r = 2, r1 = 2) that yields the first golden witness.
  const u64 modulus = 2ULL * 409 * 104;
  for (auto _ : state) {
    benchmark::DoNotOptimize(divisor_pair_split(14, modulus, fz));
  }
}
BENCHMARK(BM_divisor_pair_split);

void BM_search_l_solved(benchmark::State& state) {
  const Factorizer& fz = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_l(1, fz));
  }
}
BENCHMARK(BM_search_l_solved);

void BM_search_l_exception(benchmark::State& state) {
  const Factorizer& fz = engine();
  // Full clean miss: every r up to 12l is scanned and rejected.
  for (auto _ : state) {
    benchmark::DoNotOptimize(search_l(17, fz));
  }
}
BENCHMARK(BM_search_l_exception);

void BM_multiplier_search(benchmark::State& state) {
  const Factorizer& fz = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiplier_search(17, 100, fz));
  }
}
BENCHMARK(BM_multiplier_search);

void BM_verify_triple(benchmark::State& state) {
  const UnitTriple t{431566, 13447105790ULL, 98022323785ULL};
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_triple(1726201, t));
  }
}
BENCHMARK(BM_verify_triple);

void BM_solve_identity(benchmark::State& state) {
  const Pipeline& pipe = solver();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipe.solve(409));
  }
}
BENCHMARK(BM_solve_identity);

void BM_solve_split_fallthrough(benchmark::State& state) {
  // 409 with the identity stage filtered out: exercises the split ladder.
  const Pipeline& pipe = solver();
  const std::vector<Stage> filter = {Stage::split, Stage::multiplier};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipe.solve_filtered(409, filter));
  }
}
BENCHMARK(BM_solve_split_fallthrough);

void BM_enumerate_all(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_all(409));
  }
}
BENCHMARK(BM_enumerate_all);

void BM_parametric_search(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(parametric_search(409, 1000, 1000));
  }
}
BENCHMARK(BM_parametric_search);

void BM_exception_sieve_100(benchmark::State& state) {
  const Factorizer& fz = engine();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exception_sieve(1, 100, fz));
  }
}
BENCHMARK(BM_exception_sieve_100);

}  // namespace

BENCHMARK_MAIN();
