#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "estraus/arith.hpp"

namespace estraus {

// Candidate solution of 4/n = 1/x + 1/y + 1/z in positive integers.
struct UnitTriple {
  u64 x = 0, y = 0, z = 0;

  friend auto operator<=>(const UnitTriple&, const UnitTriple&) = default;
};

// Exact check of n*(xy + yz + zx) = 4xyz. No rounding, no wraparound: the
// comparison runs in 256-bit arithmetic, so it is exact for every 64-bit
// input. Zero components never verify.
bool verify_triple(u64 n, const UnitTriple& t) noexcept;

// Components sorted ascending. Verification status is unchanged: the
// identity is symmetric in x, y, z.
UnitTriple canonicalize(UnitTriple t) noexcept;

// Range the smallest denominator of a canonical solution must lie in:
// 1/x < 4/n <= 3/x forces n/4 < x <= 3n/4.
struct XBounds {
  u64 lo = 0, hi = 0;
};
XBounds x_bounds(u64 n);  // throws std::invalid_argument for n < 2

enum class MethodKind {
  identity,          // closed-form family F1..F27
  split,             // divisor pair split of 4r-1
  multiplier_split,  // divisor pair split of r1*(4r-1)
  parametric,        // two-parameter (w5, u5) search
  corollary,         // linear families from the w2 = 1 slice
  oracle,            // exhaustive enumeration
  manual,            // externally supplied triple
};

struct Method {
  MethodKind kind = MethodKind::manual;
  int family = 0;  // F-number for identity, 0 otherwise

  friend auto operator<=>(const Method&, const Method&) = default;
};

std::string to_string(MethodKind k);                          // "identity", "split", ...
std::string to_string(const Method& m);                       // "identity:F8", "split", ...
std::optional<Method> method_from_string(std::string_view s);

// A verified solution together with how it was found. Construction via
// make() re-verifies, so an instance in hand always satisfies the identity.
struct Decomposition {
  u64 n = 0;
  UnitTriple triple;
  Method method;
  std::map<std::string, u64> params;

  static Decomposition make(u64 n, UnitTriple t, Method m, std::map<std::string, u64> params = {});
};

// make() received a triple that fails verify_triple.
class VerificationError : public std::logic_error {
 public:
  explicit VerificationError(const std::string& what) : std::logic_error(what) {}
};

// Single-line JSON record {"n":..,"x":..,"y":..,"z":..,"method":..,"params":{..}}.
std::string to_json_line(const Decomposition& d);
// Parses and re-verifies one record. Throws std::runtime_error on malformed
// input and VerificationError if the triple does not verify.
Decomposition decomposition_from_json(std::string_view line);

}  // namespace estraus
