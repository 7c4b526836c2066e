#include "estraus/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace estraus;

namespace {

// Independent reference: scan x <= y directly, solve for z exactly.
std::vector<UnitTriple> naive_all(u64 n) {
  std::vector<UnitTriple> out;
  for (u64 x = n / 4 + 1; x <= 3 * n / 4; ++x) {
    // 4/n - 1/x > 0 needs y <= 2 / (4/n - 1/x) = 2nx / (4x - n).
    const u64 y_hi = 2 * n * x / (4 * x - n);
    for (u64 y = x; y <= y_hi; ++y) {
      const u128 den = static_cast<u128>(n) * x * y;
      const u128 num = static_cast<u128>(4) * x * y;
      const u128 sub = static_cast<u128>(n) * (x + y);
      if (num <= sub) continue;  // 4/n - 1/x - 1/y <= 0
      const u128 d = num - sub;
      if (den % d != 0) continue;
      const u128 z = den / d;
      if (z < y) continue;
      out.push_back({x, y, static_cast<u64>(z)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("enumerate_all reference sets") {
  CHECK(enumerate_all(2).solutions == std::vector<UnitTriple>{{1, 2, 2}});
  CHECK(enumerate_all(3).solutions ==
        std::vector<UnitTriple>{{1, 4, 12}, {1, 6, 6}, {2, 2, 3}});
  CHECK(enumerate_all(4).solutions ==
        std::vector<UnitTriple>{{2, 3, 6}, {2, 4, 4}, {3, 3, 3}});
  CHECK(enumerate_all(5).solutions == std::vector<UnitTriple>{{2, 4, 20}, {2, 5, 10}});
  CHECK(enumerate_all(13).solutions ==
        std::vector<UnitTriple>{{4, 18, 468}, {4, 20, 130}, {4, 26, 52}, {5, 10, 130}});
  CHECK(enumerate_all(2).exhausted);
}

TEST_CASE("enumerate_all output is canonical, sorted, verified") {
  for (u64 n = 2; n <= 150; ++n) {
    const OracleResult r = enumerate_all(n);
    CHECK(r.n == n);
    CHECK(r.exhausted);
    CAPTURE(n);
    for (const UnitTriple& t : r.solutions) {
      CHECK(t.x <= t.y);
      CHECK(t.y <= t.z);
      CHECK(verify_triple(n, t));
    }
    CHECK(std::is_sorted(r.solutions.begin(), r.solutions.end()));
    CHECK(std::set<UnitTriple>(r.solutions.begin(), r.solutions.end()).size() ==
          r.solutions.size());
  }
}

TEST_CASE("enumerate_all matches the naive reference") {
  for (u64 n = 2; n <= 80; ++n) {
    CAPTURE(n);
    CHECK(enumerate_all(n).solutions == naive_all(n));
  }
}

TEST_CASE("known large decompositions appear") {
  const OracleResult r409 = enumerate_all(409);
  const UnitTriple known{104, 6544, 85072};
  CHECK(std::binary_search(r409.solutions.begin(), r409.solutions.end(), known));
  CHECK_FALSE(r409.solutions.empty());
}

TEST_CASE("max_solutions truncation") {
  const OracleResult full = enumerate_all(13);
  REQUIRE(full.solutions.size() == 4);

  const OracleResult two = enumerate_all(13, 2);
  CHECK(two.solutions == std::vector<UnitTriple>{{4, 18, 468}, {4, 20, 130}});
  CHECK_FALSE(two.exhausted);

  // A cap equal to the true count is not a truncation.
  const OracleResult four = enumerate_all(13, 4);
  CHECK(four.solutions == full.solutions);
  CHECK(four.exhausted);

  const OracleResult one = enumerate_all(2, 1);
  CHECK(one.solutions.size() == 1);
  CHECK(one.exhausted);  // (1,2,2) is the only solution
}

TEST_CASE("count_solutions") {
  CHECK(count_solutions(2) == 1);
  CHECK(count_solutions(3) == 3);
  CHECK(count_solutions(4) == 3);
  CHECK(count_solutions(5) == 2);
  CHECK(count_solutions(13) == 4);
  for (u64 n : {7ULL, 24ULL, 97ULL}) {
    CAPTURE(n);
    CHECK(count_solutions(n) == enumerate_all(n).solutions.size());
  }
  CHECK(count_solutions(409) >= 1);
}

TEST_CASE("enumerate_all rejects n < 2") {
  CHECK_THROWS_AS(enumerate_all(1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_all(0), std::invalid_argument);
}
