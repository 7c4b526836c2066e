#include "estraus/primality.hpp"

namespace estraus {
namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod_u64(u64 b, u64 e, u64 m) {
  u64 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

// One Miller-Rabin round; n odd, n > 2, n-1 = d * 2^s.
bool mr_round_u64(u64 n, u64 a, u64 d, int s) {
  a %= n;
  if (a == 0) return true;
  u64 x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Addition-chain mulmod for 128-bit moduli (cold path only).
u128 mulmod_u128(u128 a, u128 b, u128 m) {
  a %= m;
  u128 r = 0;
  while (b) {
    if (b & 1) {
      r = (r >= m - a) ? r - (m - a) : r + a;
    }
    a = (a >= m - a) ? a - (m - a) : a + a;
    b >>= 1;
  }
  return r;
}

u128 powmod_u128(u128 b, u128 e, u128 m) {
  u128 r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u128(r, b, m);
    b = mulmod_u128(b, b, m);
    e >>= 1;
  }
  return r;
}

bool mr_round_u128(u128 n, u128 a, u128 d, int s) {
  a %= n;
  if (a == 0) return true;
  u128 x = powmod_u128(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u128(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 splitmix64(u64& state) {
  u64 z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // This witness set decides primality for every n < 3.3 * 10^24 > 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!mr_round_u64(n, a, d, s)) return false;
  }
  return true;
}

bool is_prime_u128(u128 n, u64 seed) noexcept {
  if (n < (static_cast<u128>(1) << 64)) return is_prime(static_cast<u64>(n));
  if ((n & 1) == 0) return false;
  for (u64 p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return false;
  }
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  u64 state = seed;
  for (int round = 0; round < 64; ++round) {
    u128 a = (static_cast<u128>(splitmix64(state)) << 64) | splitmix64(state);
    a = 2 + a % (n - 3);
    if (!mr_round_u128(n, a, d, s)) return false;
  }
  return true;
}

std::string to_string_u128(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

}  // namespace estraus
