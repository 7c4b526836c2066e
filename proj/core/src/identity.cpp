#include "estraus/identity.hpp"

#include <stdexcept>

namespace estraus {
namespace {

u64 mul(u64 a, u64 b) { return checked_mul_u64(a, b); }
u64 mul(u64 a, u64 b, u64 c) { return checked_mul_u64(checked_mul_u64(a, b), c); }

using Params = std::map<std::string, u64>;

// Smallest divisor >= 5 congruent to 2 mod 3, or 0. `f` gets value/d scaled.
u64 smallest_2mod3_divisor(const Factorization& f, const Factorizer& fz) {
  std::vector<u64> divs = fz.divisors(f);
  for (u64 d : divs) {
    if (d >= 5 && d % 3 == 2) return d;
  }
  return 0;
}

// Families are residue classes except F8; conditions below mirror the table
// in family_table(). Returns params if fid applies to n.
std::optional<Params> match_family(int fid, u64 n, const Factorizer& fz) {
  Params p;
  switch (fid) {
    case 1:
      if (n % 2) return std::nullopt;
      p["m"] = n / 2;
      return p;
    case 2:
      if (n % 3) return std::nullopt;
      p["m"] = n / 3;
      return p;
    case 3:
      if (n % 3 != 2 || n < 5) return std::nullopt;
      p["m"] = (n - 2) / 3;
      return p;
    case 4:
      if (n % 4 != 3 || n < 7) return std::nullopt;
      p["m"] = (n - 3) / 4;
      return p;
    case 5:
      if (n % 8 != 5) return std::nullopt;
      p["k"] = static_cast<u64>((static_cast<u128>(n) + 3) / 8);
      return p;
    case 6:
      if (n % 24 != 9) return std::nullopt;
      p["l"] = static_cast<u64>((static_cast<u128>(n) + 15) / 24);
      return p;
    case 7:
      if (n % 24 != 17) return std::nullopt;
      p["l"] = static_cast<u64>((static_cast<u128>(n) + 7) / 24);
      return p;
    case 8: {
      if (n % 24 != 1 || n < 25) return std::nullopt;
      const u64 l = (n - 1) / 24;
      const u64 d1 = smallest_2mod3_divisor(fz.factorize(6 * l + 1), fz);
      const u64 d2 = smallest_2mod3_divisor(fz.factorize(n), fz);
      u64 d = 0;
      if (d1 && d2) {
        d = std::min(d1, d2);
      } else {
        d = d1 ? d1 : d2;
      }
      if (!d) return std::nullopt;
      p["l"] = l;
      p["b"] = (d - 2) / 3;
      p["factor"] = d;
      p["f"] = mul(6 * l + 1, n) / d;
      return p;
    }
    case 9:
      if (n % 40 != 33) return std::nullopt;
      p["b"] = static_cast<u64>((static_cast<u128>(n) + 7) / 40);
      return p;
    case 10:
      if (n % 56 != 49) return std::nullopt;
      p["b"] = static_cast<u64>((static_cast<u128>(n) + 7) / 56);
      return p;
    case 11:
      if (n % 56 != 33 || n < 89) return std::nullopt;
      p["b"] = (n - 33) / 56;
      return p;
    case 12:
      if (n % 56 != 41 || n < 97) return std::nullopt;
      p["b"] = (n - 41) / 56;
      return p;
    case 13:
      if (n % 56 != 17 || n < 73) return std::nullopt;
      p["b"] = (n - 17) / 56;
      return p;
    case 14:
      if (n % 120 != 25) return std::nullopt;
      p["b"] = static_cast<u64>((static_cast<u128>(n) + 95) / 120);
      return p;
    case 15:
      if (n % 120 != 73) return std::nullopt;
      p["b"] = static_cast<u64>((static_cast<u128>(n) + 47) / 120);
      return p;
    case 16:
      if (n % 120 != 97) return std::nullopt;
      p["b"] = static_cast<u64>((static_cast<u128>(n) + 23) / 120);
      return p;
    case 17:
      if (n % 840 != 241) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 599) / 840);
      return p;
    case 18:
      if (n % 840 != 481) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 359) / 840);
      return p;
    case 19:
      if (n % 840 != 601) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 239) / 840);
      return p;
    case 20:
      if (n % 840 != 721) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 119) / 840);
      return p;
    case 21:
      if (n % 840 != 49) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 791) / 840);
      return p;
    case 22:
      if (n % 840 != 409) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 431) / 840);
      return p;
    case 23:
      if (n % 840 != 649) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 191) / 840);
      return p;
    case 24:
      if (n % 840 != 769) return std::nullopt;
      p["c"] = static_cast<u64>((static_cast<u128>(n) + 71) / 840);
      return p;
    case 25:
    case 26:
    case 27:
      if (n % 4 != 3) return std::nullopt;
      p["q"] = static_cast<u64>((static_cast<u128>(n) + 1) / 4);
      return p;
    case 28:
      if (n % 12 != 5) return std::nullopt;
      p["u5"] = 1;
      p["w6"] = static_cast<u64>((static_cast<u128>(n) + 7) / 12);
      return p;
    case 29:
      if (n % 28 != 5) return std::nullopt;
      p["u5"] = 2;
      p["w6"] = static_cast<u64>((static_cast<u128>(n) + 23) / 28);
      return p;
    case 30:
      if (n % 44 != 41) return std::nullopt;
      p["u5"] = 3;
      p["w6"] = static_cast<u64>((static_cast<u128>(n) + 47) / 44);
      return p;
    case 31:
      if (n % 60 != 41) return std::nullopt;
      p["u5"] = 4;
      p["w6"] = static_cast<u64>((static_cast<u128>(n) + 79) / 60);
      return p;
    default:
      throw std::invalid_argument("unknown family F" + std::to_string(fid));
  }
}

UnitTriple family_triple(int fid, u64 n, const Params& p) {
  switch (fid) {
    case 1: {
      const u64 m = p.at("m");
      return {n, n, m};
    }
    case 2: {
      const u64 m = p.at("m");
      return {2 * m, 2 * m, n};
    }
    case 3: {
      const u64 m = p.at("m");
      return {n, m + 1, mul(m + 1, n)};
    }
    case 4: {
      const u64 m = p.at("m");
      const u64 y = mul(2, n, m + 1);
      return {m + 1, y, y};
    }
    case 5: {
      const u64 k = p.at("k");
      return {2 * k, mul(2 * k, n), mul(k, n)};
    }
    case 6: {
      const u64 l = p.at("l");
      const u64 y = mul(2 * (2 * l - 1), n);
      return {6 * l - 3, y, y};
    }
    case 7: {
      const u64 l = p.at("l");
      return {6 * l - 1, mul(2 * l, 6 * l - 1, n), mul(2 * l, n)};
    }
    case 8: {
      const u64 b = p.at("b"), f = p.at("f");
      return {6 * p.at("l") + 1, mul(3 * b + 2, b + 1, f), mul(b + 1, f)};
    }
    case 9: {
      const u64 b = p.at("b");
      return {10 * b, mul(5 * b, n), mul(2 * b, n)};
    }
    case 10: {
      const u64 b = p.at("b");
      const u64 y = mul(4 * b, n);
      return {14 * b, y, y};
    }
    case 11: {
      const u64 b = p.at("b");
      return {2 * (7 * b + 5), mul(b + 1, 7 * b + 5, n), mul(2 * (b + 1), n)};
    }
    case 12: {
      const u64 b = p.at("b");
      return {2 * (7 * b + 6), mul(2 * (b + 1), 7 * b + 6, n), mul(2 * (b + 1), n)};
    }
    case 13: {
      const u64 b = p.at("b");
      return {2 * (7 * b + 3), mul(2 * (2 * b + 1), 7 * b + 3, n), mul(2 * b + 1, n)};
    }
    case 14: {
      const u64 b = p.at("b");
      return {30 * b - 23, mul(10 * (24 * b - 19), 30 * b - 23), mul(2 * (24 * b - 19), 30 * b - 23)};
    }
    case 15: {
      const u64 b = p.at("b");
      return {30 * b - 10, mul(5 * (3 * b - 1), n), mul(2 * (3 * b - 1), n)};
    }
    case 16: {
      const u64 b = p.at("b");
      return {30 * b - 5, mul(10 * (6 * b - 1), n), mul(2 * (6 * b - 1), n)};
    }
    case 17: {
      const u64 c = p.at("c");
      return {210 * c - 147, mul(42 * (10 * c - 7), n), mul(2 * (10 * c - 7), n)};
    }
    case 18: {
      const u64 c = p.at("c");
      return {210 * c - 88, mul(15 * c - 6, 105 * c - 44, n), mul(2 * (15 * c - 6), n)};
    }
    case 19: {
      const u64 c = p.at("c");
      return {210 * c - 58, mul(2 * (15 * c - 4), 105 * c - 29, n), mul(2 * (15 * c - 4), n)};
    }
    case 20: {
      const u64 c = p.at("c");
      const u64 y = mul(28 * (15 * c - 2), 120 * c - 17);
      return {210 * c - 28, y, y};
    }
    case 21: {
      const u64 c = p.at("c");
      const u64 y = mul(28 * (120 * c - 113), 15 * c - 14);
      return {210 * c - 196, y, y};
    }
    case 22: {
      const u64 c = p.at("c");
      return {210 * c - 106, mul(30 * (2 * c - 1), 105 * c - 53, n), mul(15 * (2 * c - 1), n)};
    }
    case 23: {
      const u64 c = p.at("c");
      return {210 * c - 46, mul(3 * (5 * c - 1), 105 * c - 23, n), mul(6 * (5 * c - 1), n)};
    }
    case 24: {
      const u64 c = p.at("c");
      return {210 * c - 16, mul(2 * (15 * c - 1), 105 * c - 8, n), mul(2 * (15 * c - 1), n)};
    }
    case 25: {
      const u64 q = p.at("q");
      const u64 xy = mul(n, 2 * q);  // n(n+1)/2
      return {xy, xy, q};
    }
    case 26: {
      const u64 q = p.at("q");
      return {2 * q, 2 * q, mul(n, q)};
    }
    case 27: {
      const u64 q = p.at("q");
      return {mul(n, q), q + 1, mul(q, q + 1)};
    }
    case 28:
    case 29:
    case 30:
    case 31: {
      const u64 u5 = p.at("u5"), w6 = p.at("w6");
      const u64 v4 = 4 * w6 - u5 - 1;
      return {mul(u5, n), mul(v4, n), mul(u5, v4)};
    }
    default:
      throw std::invalid_argument("unknown family F" + std::to_string(fid));
  }
}

}  // namespace

ClassifyResult classify(u64 n, const Factorizer& factorizer) {
  ClassifyResult result;
  if (n < 2) return result;
  for (int fid = 1; fid <= 31; ++fid) {
    try {
      if (auto p = match_family(fid, n, factorizer)) {
        result.families.push_back({fid, std::move(*p)});
      }
    } catch (const ResourceLimitError&) {
      // Only F8 consults the factor engine; report it undetermined.
      result.factor_scan_incomplete = true;
    } catch (const OverflowError&) {
      // F8's scaled factor f = (6l+1)n/(3b+2) can exceed 64 bits for very
      // large n; that also leaves F8 undetermined rather than absent.
      result.factor_scan_incomplete = true;
    }
  }
  return result;
}

Decomposition apply_family(int family, u64 n, const std::map<std::string, u64>& params,
                           const Factorizer& factorizer) {
  if (family < 1 || family > 31) {
    throw std::invalid_argument("unknown family F" + std::to_string(family));
  }
  Params derived;
  if (family == 8 && params.count("b")) {
    // Caller picked the factor: honor any qualifying 3b+2, not just the
    // smallest.
    if (n % 24 != 1 || n < 25) throw std::invalid_argument("F8 does not apply to n");
    const u64 b = params.at("b");
    const u64 d = 3 * b + 2;
    const u64 l = (n - 1) / 24;
    if (b < 1 || ((6 * l + 1) % d != 0 && n % d != 0)) {
      throw std::invalid_argument("F8: 3b+2 divides neither 6l+1 nor n");
    }
    derived["l"] = l;
    derived["b"] = b;
    derived["factor"] = d;
    derived["f"] = mul(6 * l + 1, n) / d;
  } else {
    auto m = match_family(family, n, factorizer);
    if (!m) {
      throw std::invalid_argument("family F" + std::to_string(family) + " does not apply to n=" +
                                  std::to_string(n));
    }
    derived = std::move(*m);
  }
  for (const auto& [key, value] : params) {
    auto it = derived.find(key);
    if (it == derived.end()) {
      throw std::invalid_argument("family F" + std::to_string(family) + ": unknown parameter " + key);
    }
    if (it->second != value) {
      throw std::invalid_argument("family F" + std::to_string(family) + ": parameter " + key +
                                  " inconsistent with n");
    }
  }
  const Method method = family <= 27 ? Method{MethodKind::identity, family}
                                     : Method{MethodKind::corollary, family};
  const UnitTriple triple = family_triple(family, n, derived);
  return Decomposition::make(n, triple, method, std::move(derived));
}

const std::vector<FamilyInfo>& family_table() {
  static const std::vector<FamilyInfo> table = {
      {1, "n = 2m", "(2m, 2m, m)", "4/(2m) = 1/(2m) + 1/(2m) + 1/m"},
      {2, "n = 3m", "(2m, 2m, 3m)", "4/(3m) = 1/(2m) + 1/(2m) + 1/(3m)"},
      {3, "n = 3m + 2", "(n, m+1, (m+1)n)", "3/n over (m+1)n: 3(m+1) = 1 + (3m+2)"},
      {4, "n = 4m + 3", "(m+1, 2(m+1)n, 2(m+1)n)", "4/n - 1/(m+1) = 1/((m+1)n); halve"},
      {5, "n = 8k - 3", "(2k, 2kn, kn)", "4/n - 1/(2k) = 3/(2kn); 3 = 1 + 2"},
      {6, "n = 24l - 15", "(6l-3, 2(2l-1)n, 2(2l-1)n)", "4/n - 1/(6l-3) = 1/((2l-1)n); halve"},
      {7, "n = 24l - 7", "(6l-1, 2l(6l-1)n, 2ln)", "3/((6l-1)n) = 6l/(2l(6l-1)n); 6l = 1 + (6l-1)"},
      {8, "n = 24l + 1 with a divisor 3b+2 >= 5 of 6l+1 or n",
       "(6l+1, (3b+2)(b+1)f, (b+1)f) where f = (6l+1)n/(3b+2)",
       "4/n - 1/(6l+1) = 3/((3b+2)f); 3(b+1) = 1 + (3b+2)"},
      {9, "n = 40b - 7", "(10b, 5bn, 2bn)", "4/n - 1/(10b) = 7/(10bn); 7 = 2 + 5"},
      {10, "n = 56b - 7", "(14b, 4bn, 4bn)", "4/n - 1/(14b) = 1/(2bn); halve"},
      {11, "n = 56b + 33", "(2(7b+5), (b+1)(7b+5)n, 2(b+1)n)", "7(b+1) = 2 + (7b+5)"},
      {12, "n = 56b + 41", "(2(7b+6), 2(b+1)(7b+6)n, 2(b+1)n)", "7(b+1) = 1 + (7b+6)"},
      {13, "n = 56b + 17", "(2(7b+3), 2(2b+1)(7b+3)n, (2b+1)n)", "7(2b+1) = 1 + 2(7b+3)"},
      {14, "n = 120b - 95", "(30b-23, 10(24b-19)(30b-23), 2(24b-19)(30b-23))",
       "4/n - 1/(30b-23) = 6/(10(24b-19)(30b-23)); 6 = 1 + 5"},
      {15, "n = 120b - 47", "(30b-10, 5(3b-1)n, 2(3b-1)n)", "7/(10(3b-1)n); 7 = 2 + 5"},
      {16, "n = 120b - 23", "(30b-5, 10(6b-1)n, 2(6b-1)n)", "6/(10(6b-1)n); 6 = 1 + 5"},
      {17, "n = 840c - 599", "(210c-147, 42(10c-7)n, 2(10c-7)n)", "22/(42(10c-7)n); 22 = 1 + 21"},
      {18, "n = 840c - 359", "(210c-88, (15c-6)(105c-44)n, 2(15c-6)n)", "7(15c-6) = 2 + (105c-44)"},
      {19, "n = 840c - 239", "(210c-58, 2(15c-4)(105c-29)n, 2(15c-4)n)", "7(15c-4) = 1 + (105c-29)"},
      {20, "n = 840c - 119", "(210c-28, 28(15c-2)(120c-17), 28(15c-2)(120c-17))",
       "n = 7(120c-17); 4/n - 1/(210c-28) = 1/(14(15c-2)(120c-17)); halve"},
      {21, "n = 840c - 791", "(210c-196, 28(120c-113)(15c-14), 28(120c-113)(15c-14))",
       "n = 7(120c-113); 4/n - 1/(210c-196) = 1/(14(120c-113)(15c-14)); halve"},
      {22, "n = 840c - 431", "(210c-106, 30(2c-1)(105c-53)n, 15(2c-1)n)", "7(30c-15) = 1 + (210c-106)"},
      {23, "n = 840c - 191", "(210c-46, 3(5c-1)(105c-23)n, 6(5c-1)n)", "7(15c-3) = 2 + (105c-23)"},
      {24, "n = 840c - 71", "(210c-16, 2(15c-1)(105c-8)n, 2(15c-1)n)", "7(15c-1) = 1 + (105c-8)"},
      {25, "n = 4q - 1", "(2qn, 2qn, q)", "4/n = 4/(n+1) + 4/(n(n+1)); n+1 = 4q"},
      {26, "n = 4q - 1", "(2q, 2q, qn)", "4/n = 4/(n+1) + 4/(n(n+1)); n+1 = 4q"},
      {27, "n = 4q - 1", "(qn, q+1, q(q+1))", "as F26, then 1/q = 1/(q+1) + 1/(q(q+1))"},
      {28, "n = 12w6 - 7", "(n, (4w6-2)n, 4w6-2)", "w2 = 1 slice, u5 = 1, v4 = 4w6-2"},
      {29, "n = 28w6 - 23", "(2n, (4w6-3)n, 2(4w6-3))", "w2 = 1 slice, u5 = 2, v4 = 4w6-3"},
      {30, "n = 44w6 - 47", "(3n, (4w6-4)n, 3(4w6-4))", "w2 = 1 slice, u5 = 3, v4 = 4w6-4"},
      {31, "n = 60w6 - 79", "(4n, (4w6-5)n, 4(4w6-5))", "w2 = 1 slice, u5 = 4, v4 = 4w6-5"},
  };
  return table;
}

std::vector<ResidueClass> residue_atlas(u64 modulus) {
  if (modulus != 120 && modulus != 840) {
    throw std::invalid_argument("residue atlas is defined for modulus 120 or 840");
  }
  std::vector<ResidueClass> atlas;
  atlas.reserve(modulus);
  for (u64 r = 0; r < modulus; ++r) {
    int fam = 0;
    if (r % 2 == 0) {
      fam = 1;
    } else if (r % 3 == 0) {
      fam = 2;
    } else if (r % 3 == 2) {
      fam = 3;
    } else if (r % 4 == 3) {
      fam = 4;
    } else if (r % 8 == 5) {
      fam = 5;
    } else if (r % 24 == 9) {
      fam = 6;
    } else if (r % 24 == 17) {
      fam = 7;
    } else {
      // r = 1 mod 24: the layered coverage of 24l+1.
      switch (r % 120) {
        case 25:
          fam = 14;
          break;
        case 73:
          fam = 15;
          break;
        case 97:
          fam = 16;
          break;
        default:
          if (modulus == 840) {
            switch (r % 840) {
              case 241: fam = 17; break;
              case 481: fam = 18; break;
              case 601: fam = 19; break;
              case 721: fam = 20; break;
              case 49: fam = 21; break;
              case 409: fam = 22; break;
              case 649: fam = 23; break;
              case 769: fam = 24; break;
              default: fam = 0; break;
            }
          }
          break;
      }
    }
    atlas.push_back({r, fam ? ResidueStatus::resolved : ResidueStatus::possible_exception, fam});
  }
  return atlas;
}

}  // namespace estraus
