#pragma once

#include "estraus/arith.hpp"

namespace estraus {

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n) noexcept;

// Miller-Rabin for values that may not fit in 64 bits. Below 2^64 this is
// the deterministic test above. At or above 2^64 it runs 64 pseudo-random
// rounds derived from `seed`, so a composite passes with probability under
// 4^-64 = 2^-128; callers needing certainty must stay below 2^64.
bool is_prime_u128(u128 n, u64 seed = 0x9e3779b97f4a7c15ULL) noexcept;

}  // namespace estraus
