#pragma once

#include <optional>
#include <vector>

#include "estraus/triple.hpp"

namespace estraus {

// Decompositions of 4/p built from the factor pattern
//   4/p = 1/(u5*p) + 1/(v4*p) + 1/w3,
// which holds exactly when u5*v4 = w2*w3, u5 + v4 = w2*w4 and p = 4*w3 - w4
// for some positive w2. Case numbering used throughout this module: case 1
// is even n (handled by the identity table), case 2 is p = 3 (mod 4)
// (closed forms), case 3 is p = 1 (mod 4) (the (w5, u5) grid search).

struct ParametricWitness {
  u64 p = 0;
  u64 w5 = 0;  // w4 = 4*w5 + 3
  u64 u5 = 0;
  u64 w2 = 0;
  u64 v4 = 0;
  u64 w3 = 0;  // = w5 + (p+3)/4
  u64 w4 = 0;
  // Set only for witnesses coming from the w2 = 1 linear families.
  std::optional<u64> w6, w7;

  UnitTriple triple() const;          // (u5*p, v4*p, w3)
  Decomposition decomposition() const;  // method "parametric", re-verified
};

// One linear family p = slope*w6 + w6_offset (equivalently slope*w7 +
// w7_offset with 0 <= w7_offset < slope), obtained by forcing w2 = 1 and
// u5 + v4 = 4*w6 - 1. Every p in the family gets the decomposition
// (u5*p, v4*p, u5*v4) with v4 = 4*w6 - u5 - 1; families with u5 = 1..4 are
// also registered as classifier families F28-F31.
struct CorollaryFamily {
  u64 u5 = 0;
  u64 slope = 0;      // 16*u5 - 4
  i64 w6_offset = 0;  // -(4*u5^2 + 4*u5 - 1)
  u64 w7_offset = 0;  // w6_offset reduced into [0, slope)
};

// Row of case3_primes_from: a (w2, w3, w4) splitting of the pair (u5, v4)
// and the p = 4*w3 - w4 it solves.
struct Case3Entry {
  u64 w2 = 0;
  u64 w3 = 0;
  u64 w4 = 0;
  u64 p = 0;
};

// The three closed forms for p = 3 (mod 4), as Decompositions in family
// order F25, F26, F27. Throws std::invalid_argument on residue mismatch.
std::vector<Decomposition> case2_forms(u64 p);

// One cell of the case-3 grid: with w4 = 4*w5 + 3 fixed, u5 determines
// denom = w4*u5 - (p+3)/4 - w5; a witness exists iff denom > 0 and
// denom | u5^2. Requires p = 1 (mod 4) (throws std::invalid_argument);
// primality of p is not checked -- the identity only needs the residue.
std::optional<ParametricWitness> parametric_step(u64 p, u64 w5, u64 u5);

// All witnesses with 0 <= w5 <= w5_max, 1 <= u5 <= u5_max, ordered by
// (w5, u5). Within each w5 the scan starts just above the denominator
// positivity bound, which skips only cells that are absent anyway.
std::vector<ParametricWitness> parametric_search(u64 p, u64 w5_max, u64 u5_max);

// First witness in (w5, u5) order, without collecting the rest.
std::optional<ParametricWitness> parametric_first(u64 p, u64 w5_max, u64 u5_max);

// The w2 = 1 linear families for u5 = 1..u5_max.
std::vector<CorollaryFamily> corollary_families(u64 u5_max);

// Inverts the witness algebra: for every common divisor w2 of u5 + v4 and
// u5*v4, the split w4 = (u5+v4)/w2, w3 = u5*v4/w2 solves p = 4*w3 - w4.
// Entries with p <= 0 are dropped; rows ascend by w2. The caller filters
// for primality if it needs prime p.
std::vector<Case3Entry> case3_primes_from(u64 u5, u64 v4);

}  // namespace estraus
