#pragma once

#include <vector>

#include "estraus/factor.hpp"
#include "estraus/triple.hpp"

namespace estraus {

// Closed-form families F1..F31. Each family is a residue or factor condition
// on n together with an explicit solution of 4/n = 1/x + 1/y + 1/z. F1..F27
// are applied directly; F28..F31 are the linear families that fall out of the
// w2 = 1 slice of the two-parameter construction and are registered here so
// the classifier can report them (application delegates to that slice).
struct FamilyMatch {
  int family = 0;
  std::map<std::string, u64> params;
};

struct ClassifyResult {
  std::vector<FamilyMatch> families;  // ascending family id
  // True when the factor scan behind F8 hit a resource limit: F8 is then
  // undetermined ("unknown"), not absent.
  bool factor_scan_incomplete = false;
};

// All families applicable to n, with solved parameters. Pure; the factor
// engine is only consulted for F8.
ClassifyResult classify(u64 n, const Factorizer& factorizer = default_factorizer());

// Instantiates one family at n. Derivable parameters are recomputed from n;
// any caller-supplied entries are checked against them (for F8, a supplied
// "b" selects the factor 3b+2 instead of the smallest qualifying one).
// Throws std::invalid_argument when the family does not apply to n or the
// parameters are inconsistent. The result always re-verifies.
Decomposition apply_family(int family, u64 n, const std::map<std::string, u64>& params = {},
                           const Factorizer& factorizer = default_factorizer());

struct FamilyInfo {
  int id;
  const char* condition;   // e.g. "n = 24l - 15"
  const char* triple;      // e.g. "(6l-3, 2(2l-1)n, 2(2l-1)n)"
  const char* derivation;  // how the split of 4/n - 1/x closes
};

// Static registry, ids ascending. Rows feed the `families --list` output.
const std::vector<FamilyInfo>& family_table();

enum class ResidueStatus { resolved, possible_exception };

struct ResidueClass {
  u64 residue = 0;
  ResidueStatus status = ResidueStatus::possible_exception;
  int family = 0;  // resolving family, 0 for possible exceptions
};

// Class-wide coverage of every residue mod `modulus` by the chain
// F1..F7, F14..F16 and (mod 840) F17..F24. A residue is resolved only if the
// family applies to every member of the class; what survives is the
// possible-exception set {1, 49} mod 120 and {1, 121, 169, 289, 361, 529}
// mod 840. Throws std::invalid_argument unless modulus is 120 or 840.
std::vector<ResidueClass> residue_atlas(u64 modulus);

}  // namespace estraus
