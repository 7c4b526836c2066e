#include "estraus/pipeline.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "estraus/oracle.hpp"
#include "json.hpp"
#include "doctest.h"

using namespace estraus;

namespace {

// Unique scratch file that cleans up after itself.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const char* tag) {
    path = std::filesystem::temp_directory_path() /
           (std::string("estraus-test-") + tag + "-" + std::to_string(::getpid()) + ".jsonl");
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("stage names round trip") {
  for (Stage s : {Stage::identity, Stage::split, Stage::multiplier, Stage::parametric,
                  Stage::oracle}) {
    const auto back = stage_from_string(to_string(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(to_string(Stage::multiplier) == "multiplier");
  CHECK_FALSE(stage_from_string("bogus").has_value());
  CHECK_FALSE(stage_from_string("").has_value());
}

TEST_CASE("config validation") {
  PipelineConfig ok;
  CHECK_NOTHROW(ok.validate());
  ok.w5_max = 0;  // the 0 slice of the grid is legitimate
  CHECK_NOTHROW(ok.validate());

  PipelineConfig bad;
  bad.order.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  for (auto mutate : {+[](PipelineConfig& c) { c.r1_max = 0; },
                      +[](PipelineConfig& c) { c.u5_max = 0; },
                      +[](PipelineConfig& c) { c.factor_budget = 0; },
                      +[](PipelineConfig& c) { c.oracle_max_solutions = 0; },
                      +[](PipelineConfig& c) { c.parallelism = 0; }}) {
    PipelineConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
}

TEST_CASE("solve walks the stage ladder") {
  const Pipeline pipe;

  const SolveResult six = pipe.solve(6);
  REQUIRE(six.solved());
  CHECK(six.decomposition->method == Method{MethodKind::identity, 1});
  CHECK(six.decomposition->triple == UnitTriple{6, 6, 3});
  REQUIRE(!six.stages.empty());
  CHECK(six.stages.back().hit);
  CHECK(six.stages.back().detail == "F1");

  const SolveResult four = pipe.solve(4);
  REQUIRE(four.solved());
  CHECK(four.decomposition->method == Method{MethodKind::identity, 1});
  CHECK(four.decomposition->triple == UnitTriple{4, 4, 2});

  // 409 is covered by the first applicable closed form in id order.
  const SolveResult r409 = pipe.solve(409);
  REQUIRE(r409.solved());
  CHECK(r409.decomposition->method == Method{MethodKind::identity, 13});
  CHECK(r409.decomposition->triple == UnitTriple{104, 638040, 6135});
  CHECK(r409.decomposition->params.at("b") == 7);
  CHECK(r409.stages.size() == 1);  // first stage already hit

  CHECK_THROWS_AS(pipe.solve(1), std::invalid_argument);
  CHECK_THROWS_AS(pipe.solve(0), std::invalid_argument);
}

TEST_CASE("solve_filtered respects the stage filter") {
  const Pipeline pipe;

  const SolveResult split_only = pipe.solve_filtered(409, {Stage::split});
  CHECK_FALSE(split_only.solved());
  CHECK_FALSE(split_only.inconclusive());
  REQUIRE(split_only.stages.size() == 1);
  CHECK(split_only.stages[0].stage == Stage::split);
  CHECK(split_only.stages[0].applicable);
  CHECK_FALSE(split_only.stages[0].hit);

  const SolveResult multi = pipe.solve_filtered(409, {Stage::split, Stage::multiplier});
  REQUIRE(multi.solved());
  CHECK(multi.decomposition->method.kind == MethodKind::multiplier_split);
  CHECK(multi.decomposition->triple == UnitTriple{104, 6544, 85072});
  CHECK(multi.decomposition->params.at("l") == 17);
  CHECK(multi.decomposition->params.at("r") == 2);
  CHECK(multi.decomposition->params.at("r1") == 2);
  REQUIRE(multi.stages.size() == 2);
  CHECK(multi.stages[0].stage == Stage::split);
  CHECK_FALSE(multi.stages[0].hit);
  CHECK(multi.stages[1].stage == Stage::multiplier);
  CHECK(multi.stages[1].hit);

  const SolveResult para = pipe.solve_filtered(409, {Stage::parametric});
  REQUIRE(para.solved());
  CHECK(para.decomposition->method.kind == MethodKind::parametric);
  CHECK(para.decomposition->triple == UnitTriple{6135, 638040, 104});
  CHECK(para.decomposition->params.at("w5") == 1);
  CHECK(para.decomposition->params.at("u5") == 15);

  const SolveResult oracle = pipe.solve_filtered(13, {Stage::oracle});
  REQUIRE(oracle.solved());
  CHECK(oracle.decomposition->method.kind == MethodKind::oracle);
  CHECK(oracle.decomposition->triple == UnitTriple{4, 18, 468});

  // The split stages only apply on the 1 mod 4 track.
  const SolveResult two = pipe.solve_filtered(2, {Stage::split});
  CHECK_FALSE(two.solved());
  REQUIRE(two.stages.size() == 1);
  CHECK_FALSE(two.stages[0].applicable);

  // Stage order comes from the config, not the filter.
  PipelineConfig flipped;
  flipped.order = {Stage::parametric, Stage::identity};
  const SolveResult r = Pipeline(flipped).solve(409);
  REQUIRE(r.solved());
  CHECK(r.decomposition->method.kind == MethodKind::parametric);
  CHECK(r.stages.size() == 1);
}

TEST_CASE("solve is deterministic and consistent with the oracle") {
  const Pipeline pipe;
  const SolveResult a = pipe.solve(23929);
  const SolveResult b = pipe.solve(23929);
  REQUIRE(a.solved());
  REQUIRE(b.solved());
  CHECK(a.decomposition->triple == b.decomposition->triple);
  CHECK(a.decomposition->method == b.decomposition->method);

  for (u64 n = 2; n <= 60; ++n) {
    const SolveResult r = pipe.solve(n);
    REQUIRE(r.solved());
    const UnitTriple c = canonicalize(r.decomposition->triple);
    const OracleResult all = enumerate_all(n);
    CAPTURE(n);
    CHECK(std::binary_search(all.solutions.begin(), all.solutions.end(), c));
  }

  const SolveResult free_fn = solve(409);
  CHECK(free_fn.decomposition->triple == pipe.solve(409).decomposition->triple);
}

TEST_CASE("budget starvation reports inconclusive, not unsolved") {
  PipelineConfig cfg;
  cfg.order = {Stage::split};
  cfg.factor_budget = 1;  // rho gives up immediately
  cfg.spf_limit = 16;     // trial division stops at 13
  const SolveResult r = Pipeline(cfg).solve(697);  // 697 = 24*29+1 = 17*41
  CHECK_FALSE(r.solved());
  CHECK(r.inconclusive());
  REQUIRE(r.stages.size() == 1);
  CHECK(r.stages[0].resource_limited);
}

TEST_CASE("sieve over l: counts, exceptions, report forms") {
  const Pipeline pipe;
  SieveRange range{true, 1, 40};
  const SieveReport rep = pipe.sieve(range, {Stage::split});

  CHECK(rep.exceptions == std::vector<u64>{17, 24});
  CHECK(rep.inconclusive.empty());
  CHECK(rep.method_counts.at("split") == 38);
  CHECK(rep.solved_total() == 38);
  CHECK(rep.solver_calls == 40);
  CHECK(rep.cache_hits == 0);
  CHECK(rep.stages_used == std::vector<Stage>{Stage::split});
  CHECK(rep.solved_total() + rep.exceptions.size() + rep.inconclusive.size() == range.size());

  // Machine form parses and carries the same numbers.
  const nlohmann::json j = nlohmann::json::parse(to_json(rep));
  CHECK(j.at("range").at("lo") == 1);
  CHECK(j.at("range").at("hi") == 40);
  CHECK(j.at("range").at("over_l") == true);
  CHECK(j.at("method_counts").at("split") == 38);
  CHECK(j.at("exceptions") == nlohmann::json({17, 24}));
  CHECK(j.at("solver_calls") == 40);

  // Human and CSV forms mention the essentials.
  const std::string text = to_text(rep);
  CHECK(text.find("exceptions (2): 17 24") != std::string::npos);
  CHECK(text.find("solved: 38 of 40") != std::string::npos);
  const std::string csv = to_csv(rep);
  CHECK(csv == "l,n\n17,409\n24,577\n");
}

TEST_CASE("sieve over n matches per-n solving") {
  const Pipeline pipe;
  const SieveReport rep = pipe.sieve(SieveRange{false, 2, 100}, {Stage::identity});
  CHECK(rep.exceptions.empty());
  CHECK(rep.inconclusive.empty());
  CHECK(rep.solved_total() == 99);

  const SieveReport full = pipe.sieve(SieveRange{false, 2, 100});
  CHECK(full.exceptions.empty());
  u64 counted = 0;
  for (const auto& [tag, c] : full.method_counts) counted += c;
  CHECK(counted == 99);

  CHECK_THROWS_AS(pipe.sieve(SieveRange{false, 1, 10}), std::invalid_argument);
  CHECK_THROWS_AS(pipe.sieve(SieveRange{true, 0, 10}), std::invalid_argument);
  CHECK_THROWS_AS(pipe.sieve(SieveRange{true, 10, 9}), std::invalid_argument);
}

TEST_CASE("sieve progress stream is JSON lines and parallelism independent") {
  PipelineConfig cfg1;
  cfg1.parallelism = 1;
  PipelineConfig cfg4;
  cfg4.parallelism = 4;

  std::ostringstream s1, s4;
  const SieveReport r1 = Pipeline(cfg1).sieve(SieveRange{true, 1, 60}, {Stage::split}, false, &s1);
  const SieveReport r4 = Pipeline(cfg4).sieve(SieveRange{true, 1, 60}, {Stage::split}, false, &s4);

  CHECK(r1.exceptions == r4.exceptions);
  CHECK(r1.inconclusive == r4.inconclusive);
  CHECK(r1.method_counts == r4.method_counts);
  CHECK(s1.str() == s4.str());  // byte-identical stream regardless of threads

  // Each line is a JSON object keyed by l with a status.
  std::istringstream lines(s1.str());
  std::string line;
  u64 expect_l = 1;
  while (std::getline(lines, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    CHECK(j.at("l") == expect_l);
    CHECK(j.at("n") == 24 * expect_l + 1);
    if (expect_l == 17 || expect_l == 24) {
      CHECK(j.at("status") == "exception");
    } else {
      CHECK(j.at("status") == "solved");
      CHECK(j.contains("x"));
    }
    ++expect_l;
  }
  CHECK(expect_l == 61);
}

TEST_CASE("sieve cache: idempotent resume, honest truncation") {
  TempFile cache("resume");
  PipelineConfig cfg;
  cfg.cache_path = cache.str();
  const Pipeline pipe(cfg);
  const SieveRange range{true, 1, 40};

  const SieveReport first = pipe.sieve(range, {Stage::split});
  CHECK(first.solver_calls == 40);
  CHECK(first.cache_hits == 0);

  // Every index is cached (solved records and unsolved markers), so a resume
  // does zero solver work and reproduces the report.
  const SieveReport second = pipe.sieve(range, {Stage::split}, true);
  CHECK(second.solver_calls == 0);
  CHECK(second.cache_hits == 40);
  CHECK(second.exceptions == first.exceptions);
  CHECK(second.method_counts == first.method_counts);

  // A partial overlap only solves the new indices.
  const SieveReport extended = pipe.sieve(SieveRange{true, 1, 50}, {Stage::split}, true);
  CHECK(extended.cache_hits == 40);
  CHECK(extended.solver_calls == 10);

  // Without resume the file is truncated and every index is recomputed.
  const SieveReport fresh = pipe.sieve(range, {Stage::split});
  CHECK(fresh.solver_calls == 40);
  CHECK(fresh.cache_hits == 0);

  // The cache holds a header plus one line per index; the markers for the
  // two exceptions say "unsolved", and solved lines re-verify on load.
  const std::vector<std::string> lines = read_lines(cache.str());
  REQUIRE(lines.size() == 41);
  const nlohmann::json header = nlohmann::json::parse(lines[0]);
  CHECK(header.at("cache") == "estraus-sieve");
  CHECK(header.at("stages") == "split");
  CHECK(header.at("over_l") == true);
  u64 unsolved = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const nlohmann::json j = nlohmann::json::parse(lines[i]);
    if (j.value("unsolved", false)) ++unsolved;
  }
  CHECK(unsolved == 2);
}

TEST_CASE("sieve cache: stage-set mismatch is an error") {
  TempFile cache("stages");
  PipelineConfig cfg;
  cfg.cache_path = cache.str();
  const Pipeline pipe(cfg);
  pipe.sieve(SieveRange{true, 1, 10}, {Stage::split});

  // Same file, different stage set: resuming would silently mix semantics.
  CHECK_THROWS_AS(
      pipe.sieve(SieveRange{true, 1, 10}, {Stage::split, Stage::multiplier}, true),
      std::runtime_error);
  // Without resume the file is truncated instead and the run succeeds.
  const SieveReport rerun = pipe.sieve(SieveRange{true, 1, 10}, {Stage::split, Stage::multiplier});
  CHECK(rerun.exceptions.empty());
}

TEST_CASE("sieve cache: tampered solution fails loudly") {
  TempFile cache("tamper");
  PipelineConfig cfg;
  cfg.cache_path = cache.str();
  const Pipeline pipe(cfg);
  pipe.sieve(SieveRange{true, 1, 5}, {Stage::split});

  // Corrupt one cached y value, keeping the record well-formed.
  std::vector<std::string> lines = read_lines(cache.str());
  bool tampered = false;
  for (std::string& line : lines) {
    auto pos = line.find("\"y\":");
    if (pos != std::string::npos && !tampered) {
      line.replace(pos, 4, "\"y\":1");
      tampered = true;
    }
  }
  REQUIRE(tampered);
  {
    std::ofstream out(cache.str(), std::ios::trunc);
    for (const std::string& line : lines) out << line << '\n';
  }
  CHECK_THROWS_AS(pipe.sieve(SieveRange{true, 1, 5}, {Stage::split}, true), VerificationError);
}

TEST_CASE("sieve cache: torn final line is dropped, earlier garbage is not") {
  TempFile cache("torn");
  PipelineConfig cfg;
  cfg.cache_path = cache.str();
  const Pipeline pipe(cfg);
  pipe.sieve(SieveRange{true, 1, 10}, {Stage::split});

  // Simulate an interrupted append: chop the last line in half.
  std::vector<std::string> lines = read_lines(cache.str());
  REQUIRE(lines.size() == 11);
  lines.back() = lines.back().substr(0, lines.back().size() / 2);
  {
    std::ofstream out(cache.str(), std::ios::trunc);
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) out << lines[i] << '\n';
    out << lines.back();  // no newline: torn write
  }
  const SieveReport resumed = pipe.sieve(SieveRange{true, 1, 10}, {Stage::split}, true);
  CHECK(resumed.cache_hits == 9);
  CHECK(resumed.solver_calls == 1);  // only the torn index is re-solved

  // The same garbage anywhere but the final line is a hard error.
  const std::vector<std::string> valid = read_lines(cache.str());
  REQUIRE(valid.size() == 11);
  {
    std::ofstream out(cache.str(), std::ios::trunc);
    out << valid[0] << '\n' << valid[1] << '\n';
    out << R"({"n":289,"x":)" << '\n';  // malformed and not last
    for (std::size_t i = 2; i < valid.size(); ++i) out << valid[i] << '\n';
  }
  CHECK_THROWS_AS(pipe.sieve(SieveRange{true, 1, 10}, {Stage::split}, true), std::runtime_error);
}

TEST_CASE("golden suite") {
  const GoldenReport rep = golden_suite();
  CHECK(rep.all_pass);
  REQUIRE(rep.items.size() == 12);

  const std::vector<u64> ls = {17,    24,    232,   400,   997,   3477,
                               4250,  13734, 29680, 47260, 71842, 71925};
  for (std::size_t i = 0; i < 12; ++i) {
    CAPTURE(i);
    CHECK(rep.items[i].l == ls[i]);
    CHECK(rep.items[i].n == 24 * ls[i] + 1);
    CHECK(rep.items[i].pass);
    CHECK(verify_triple(rep.items[i].n, rep.items[i].triple));
  }

  // The two entries whose concluding labels the source got wrong.
  CHECK(rep.items[7].n == 329617);
  CHECK(rep.items[7].n_label_corrected);
  CHECK(rep.items[11].n == 1726201);
  CHECK(rep.items[11].n_label_corrected);
  for (std::size_t i : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 8u, 9u, 10u})
    CHECK_FALSE(rep.items[i].n_label_corrected);

  // Spot values.
  CHECK(rep.items[0].triple == UnitTriple{104, 6544, 85072});
  CHECK(rep.items[3].triple == UnitTriple{2405, 1248130, 46180810});
  CHECK(rep.items[9].triple == UnitTriple{283561, 107668961166ULL, 25086867951678ULL});
  CHECK(rep.items[11].triple == UnitTriple{431566, 13447105790ULL, 98022323785ULL});
}
