#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "estraus/factor.hpp"
#include "estraus/triple.hpp"

namespace estraus {

// Solver stages, cheapest first. The identity stage may emit decompositions
// tagged either "identity" (F1-F27) or "corollary" (the linear families
// F28-F31, which the classifier also knows).
enum class Stage { identity, split, multiplier, parametric, oracle };

std::string to_string(Stage s);
std::optional<Stage> stage_from_string(std::string_view s);

struct PipelineConfig {
  std::vector<Stage> order = {Stage::identity, Stage::split, Stage::multiplier,
                              Stage::parametric, Stage::oracle};
  u64 r1_max = 100;    // multiplier stage: residual scale factor bound
  u64 w5_max = 1000;   // parametric stage bounds
  u64 u5_max = 1000;
  u64 factor_budget = FactorBudget{}.rho_iterations;
  u32 spf_limit = Factorizer::kDefaultSpfLimit;  // smallest-prime-factor table size
  u64 oracle_max_solutions = 1;  // oracle stage stops at the first hit
  std::string cache_path;        // empty: no cache
  unsigned parallelism = 1;

  void validate() const;  // throws std::invalid_argument on nonsense bounds
};

struct StageReport {
  Stage stage{};
  bool applicable = true;        // e.g. split only applies to n = 1 (mod 4)
  bool hit = false;
  bool resource_limited = false; // a work budget kept the stage from finishing
  std::string detail;
};

struct SolveResult {
  u64 n = 0;
  std::optional<Decomposition> decomposition;
  std::vector<StageReport> stages;  // in attempt order; stops at first hit

  bool solved() const noexcept { return decomposition.has_value(); }
  // True when some stage was cut short by a budget and none hit: "unsolved"
  // would then be unsound.
  bool inconclusive() const noexcept;
};

// Inclusive index range. over_l: indices are l with n = 24l + 1 (the lattice
// the exception lists live on); otherwise indices are n themselves.
struct SieveRange {
  bool over_l = true;
  u64 lo = 0, hi = 0;

  u64 size() const noexcept { return hi - lo + 1; }
  u64 n_of(u64 index) const { return over_l ? 24 * index + 1 : index; }
};

struct SieveReport {
  SieveRange range;
  std::vector<Stage> stages_used;
  std::map<std::string, u64> method_counts;  // method tag -> solved count
  std::vector<u64> exceptions;    // indices no selected stage solved
  std::vector<u64> inconclusive;  // indices whose scan hit a resource limit
  double wall_seconds = 0.0;
  u64 solver_calls = 0;  // indices actually solved this run (0 on a full resume)
  u64 cache_hits = 0;

  u64 solved_total() const noexcept;
};

std::string to_json(const SieveReport& r);  // single JSON object
std::string to_text(const SieveReport& r);  // aligned human-readable summary
std::string to_csv(const SieveReport& r);   // exception table: index,n

struct GoldenItem {
  u64 l = 0;
  u64 n = 0;  // 24l + 1
  UnitTriple triple;
  // The source table mislabels two entries' n in its concluding lines; the
  // value here is the one the arithmetic is actually carried out for.
  bool n_label_corrected = false;
  bool pass = false;
};

struct GoldenReport {
  std::vector<GoldenItem> items;
  bool all_pass = false;
};

// Twelve reference decompositions of 4/(24l+1) for the l no plain divisor
// split solves; checked bit-exact with verify_triple.
GoldenReport golden_suite();

// One configured solver: owns the factorizer (sized by cfg.spf_limit /
// cfg.factor_budget) and runs the stage pipeline.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig cfg = {});

  const PipelineConfig& config() const noexcept { return cfg_; }
  const Factorizer& factorizer() const noexcept { return factorizer_; }

  // Runs cfg.order (optionally restricted to `filter`, keeping cfg order)
  // until a stage verifies a decomposition. Deterministic given the config.
  SolveResult solve(u64 n) const;
  SolveResult solve_filtered(u64 n, const std::vector<Stage>& filter) const;

  // Applies solve_filtered to every index in the range (empty filter = full
  // cfg order). Work may run on cfg.parallelism threads over index chunks;
  // outcomes merge in index order, so the report and the progress stream are
  // independent of the thread count. With a cache path set, solved indices
  // are appended as JSON lines and `resume` skips indices already decided
  // under a stage set covering the filter. progress, when non-null, receives
  // one JSON line per index.
  SieveReport sieve(const SieveRange& range, const std::vector<Stage>& filter = {},
                    bool resume = false, std::ostream* progress = nullptr) const;

 private:
  PipelineConfig cfg_;
  Factorizer factorizer_;
};

// Convenience one-shot wrappers (they build a Pipeline per call; prefer a
// Pipeline instance in loops).
SolveResult solve(u64 n, const PipelineConfig& cfg = {});

}  // namespace estraus
