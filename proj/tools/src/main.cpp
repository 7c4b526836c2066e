// estraus: exact decomposition of 4/n into three unit fractions.
//
// Verbs: solve, sieve, verify, oracle, parametric, families, golden.
// Exit codes: 0 success/solved, 1 not-found/mismatch, 2 usage error,
// 3 resource limit.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "estraus/identity.hpp"
#include "estraus/oracle.hpp"
#include "estraus/parametric.hpp"
#include "estraus/pipeline.hpp"
#include "estraus/split.hpp"

namespace {

using namespace estraus;

constexpr int kExitSolved = 0;
constexpr int kExitNotFound = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceLimit = 3;

// Settings assembled with precedence: CLI flags > --config JSON > environment
// (ESTRAUS_CACHE, ESTRAUS_PARALLELISM) > built-in defaults.
struct Settings {
  PipelineConfig cfg;
  std::vector<Stage> methods;  // empty = full default order
};

std::vector<Stage> parse_methods(const std::string& csv) {
  std::vector<Stage> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string token = csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
    if (!token.empty()) {
      auto s = stage_from_string(token);
      if (!s) throw CLI::ValidationError("--methods", "unknown stage \"" + token + "\"");
      out.push_back(*s);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw CLI::ValidationError("--methods", "no stages selected");
  return out;
}

void apply_environment(Settings& s) {
  if (const char* cache = std::getenv("ESTRAUS_CACHE")) s.cfg.cache_path = cache;
  if (const char* par = std::getenv("ESTRAUS_PARALLELISM")) {
    try {
      const unsigned long v = std::stoul(par);
      if (v == 0) throw std::invalid_argument("zero");
      s.cfg.parallelism = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw std::runtime_error("ESTRAUS_PARALLELISM must be a positive integer");
    }
  }
}

void apply_config_file(Settings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config " + path + ": " + e.what());
  }
  if (j.contains("r1_max")) s.cfg.r1_max = j["r1_max"].get<u64>();
  if (j.contains("w5_max")) s.cfg.w5_max = j["w5_max"].get<u64>();
  if (j.contains("u5_max")) s.cfg.u5_max = j["u5_max"].get<u64>();
  if (j.contains("factor_budget")) s.cfg.factor_budget = j["factor_budget"].get<u64>();
  if (j.contains("spf_limit")) s.cfg.spf_limit = j["spf_limit"].get<u32>();
  if (j.contains("oracle_max_solutions")) s.cfg.oracle_max_solutions = j["oracle_max_solutions"].get<u64>();
  if (j.contains("cache")) s.cfg.cache_path = j["cache"].get<std::string>();
  if (j.contains("parallelism")) s.cfg.parallelism = j["parallelism"].get<unsigned>();
  if (j.contains("methods")) {
    std::vector<Stage> stages;
    for (const auto& m : j["methods"]) {
      auto st = stage_from_string(m.get<std::string>());
      if (!st) throw std::runtime_error("config " + path + ": unknown stage \"" + m.get<std::string>() + "\"");
      stages.push_back(*st);
    }
    s.methods = std::move(stages);
  }
}

std::string fraction_line(const Decomposition& d) {
  return "4/" + std::to_string(d.n) + " = 1/" + std::to_string(d.triple.x) + " + 1/" +
         std::to_string(d.triple.y) + " + 1/" + std::to_string(d.triple.z);
}

int cmd_solve(const Settings& s, u64 n, bool as_json) {
  Pipeline pipe(s.cfg);
  SolveResult r = pipe.solve_filtered(n, s.methods);
  if (r.solved()) {
    if (as_json) {
      std::cout << to_json_line(*r.decomposition) << "\n";
    } else {
      std::cout << fraction_line(*r.decomposition) << "\n";
      std::cout << "method: " << to_string(r.decomposition->method) << "\n";
      if (!r.decomposition->params.empty()) {
        std::cout << "params:";
        for (const auto& [k, v] : r.decomposition->params) std::cout << ' ' << k << '=' << v;
        std::cout << "\n";
      }
    }
    return kExitSolved;
  }
  std::cerr << "no decomposition found for n=" << n << " within configured bounds\n";
  for (const StageReport& st : r.stages) {
    std::cerr << "  " << to_string(st.stage) << ": "
              << (st.applicable ? st.detail : "not applicable (" + st.detail + ")") << "\n";
  }
  return r.inconclusive() ? kExitResourceLimit : kExitNotFound;
}

int cmd_sieve(Settings s, std::optional<u64> l_start, std::optional<u64> l_end,
              std::optional<u64> n_start, std::optional<u64> n_end, bool resume,
              bool progress, const std::string& report_path, const std::string& csv_path,
              bool spf_overridden) {
  SieveRange range;
  if (l_start || l_end) {
    if (!l_start || !l_end || n_start || n_end) {
      throw CLI::ValidationError("sieve", "give exactly one of --l-start/--l-end or --n-start/--n-end");
    }
    range.over_l = true;
    range.lo = *l_start;
    range.hi = *l_end;
  } else if (n_start && n_end) {
    range.over_l = false;
    range.lo = *n_start;
    range.hi = *n_end;
  } else {
    throw CLI::ValidationError("sieve", "give --l-start/--l-end or --n-start/--n-end");
  }

  if (!spf_overridden) {
    // Size the factor table to cover every value the scan touches, so
    // factorization is a table walk. Bounded to keep memory modest.
    const u64 top = range.over_l ? checked_add_u64(checked_mul_u64(24, range.hi), 2)
                                 : checked_add_u64(range.hi, 1);
    const u64 cap = u64{1} << 24;
    if (top > s.cfg.spf_limit) s.cfg.spf_limit = static_cast<u32>(std::min(top, cap));
  }

  Pipeline pipe(s.cfg);
  SieveReport report = pipe.sieve(range, s.methods, resume, progress ? &std::cout : nullptr);

  std::ostream& summary = progress ? std::cerr : std::cout;
  summary << to_text(report);
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write report " + report_path);
    out << to_json(report) << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write csv " + csv_path);
    out << to_csv(report);
  }
  return kExitSolved;
}

int cmd_verify(u64 n, u64 x, u64 y, u64 z) {
  const UnitTriple t{x, y, z};
  if (verify_triple(n, t)) {
    std::cout << "verified: 4/" << n << " = 1/" << x << " + 1/" << y << " + 1/" << z << "\n";
    return kExitSolved;
  }
  std::cout << "MISMATCH: 1/" << x << " + 1/" << y << " + 1/" << z << " != 4/" << n << "\n";
  return kExitNotFound;
}

int cmd_oracle(u64 n, bool count_only, std::optional<u64> max_solutions) {
  OracleResult r = enumerate_all(n, max_solutions);
  if (count_only) {
    std::cout << r.solutions.size() << "\n";
  } else {
    for (const UnitTriple& t : r.solutions) {
      std::cout << t.x << ' ' << t.y << ' ' << t.z << "\n";
    }
    if (!r.exhausted) std::cout << "(truncated at " << r.solutions.size() << " solutions)\n";
  }
  return r.solutions.empty() ? kExitNotFound : kExitSolved;
}

int cmd_parametric(u64 p, u64 w5_max, u64 u5_max, bool first_only) {
  auto emit = [](const ParametricWitness& w) {
    nlohmann::ordered_json j;
    j["p"] = w.p;
    j["w5"] = w.w5;
    j["u5"] = w.u5;
    j["w2"] = w.w2;
    j["v4"] = w.v4;
    j["w3"] = w.w3;
    j["w4"] = w.w4;
    const Decomposition d = w.decomposition();
    j["x"] = d.triple.x;
    j["y"] = d.triple.y;
    j["z"] = d.triple.z;
    std::cout << j.dump() << "\n";
  };
  if (first_only) {
    auto w = parametric_first(p, w5_max, u5_max);
    if (!w) {
      std::cerr << "no witness with w5 <= " << w5_max << ", u5 <= " << u5_max << "\n";
      return kExitNotFound;
    }
    emit(*w);
    return kExitSolved;
  }
  const auto hits = parametric_search(p, w5_max, u5_max);
  for (const auto& w : hits) emit(w);
  std::cerr << hits.size() << " witnesses for p=" << p << " with w5 <= " << w5_max
            << ", u5 <= " << u5_max << "\n";
  return hits.empty() ? kExitNotFound : kExitSolved;
}

int cmd_families() {
  std::cout << "id\tcondition\ttriple\tderivation\n";
  for (const FamilyInfo& f : family_table()) {
    std::cout << 'F' << f.id << '\t' << f.condition << '\t' << f.triple << '\t' << f.derivation
              << "\n";
  }
  return kExitSolved;
}

int cmd_golden() {
  GoldenReport report = golden_suite();
  for (const GoldenItem& item : report.items) {
    std::cout << (item.pass ? "pass" : "FAIL") << "  l=" << item.l << "  4/" << item.n << " = 1/"
              << item.triple.x << " + 1/" << item.triple.y << " + 1/" << item.triple.z
              << (item.n_label_corrected ? "  [n label corrected in source table]" : "") << "\n";
  }
  std::cout << (report.all_pass ? "golden suite: all 12 pass" : "golden suite: FAILURES") << "\n";
  return report.all_pass ? kExitSolved : kExitNotFound;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact 4/n = 1/x + 1/y + 1/z decomposer"};
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand

  Settings settings;
  std::string config_path;
  try {
    apply_environment(settings);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  // Config file must be applied before flag parsing so flags win; find it
  // with a pre-scan.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  }
  if (!config_path.empty()) {
    try {
      apply_config_file(settings, config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }
  app.add_option("--config", config_path, "JSON config file (flags override it)");

  std::string methods_csv;
  bool spf_overridden = false;
  auto add_common = [&](CLI::App* sub, bool with_methods) {
    sub->add_option("--r1-max", settings.cfg.r1_max, "multiplier stage bound");
    sub->add_option("--w5-max", settings.cfg.w5_max, "parametric w5 bound");
    sub->add_option("--u5-max", settings.cfg.u5_max, "parametric u5 bound");
    sub->add_option("--factor-budget", settings.cfg.factor_budget, "rho iteration budget");
    sub->add_option("--spf-limit", settings.cfg.spf_limit, "factor table size")
        ->each([&](const std::string&) { spf_overridden = true; });
    sub->add_option("--oracle-max", settings.cfg.oracle_max_solutions, "oracle stage solution cap");
    sub->add_option("--cache", settings.cfg.cache_path, "decomposition cache path (JSON lines)");
    sub->add_option("--parallelism", settings.cfg.parallelism, "worker threads");
    if (with_methods) {
      sub->add_option("--methods", methods_csv, "comma list: identity,split,multiplier,parametric,oracle");
    }
  };

  // solve
  u64 solve_n = 0;
  bool solve_json = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "decompose 4/n");
  solve_cmd->add_option("n", solve_n, "denominator, n >= 2")->required();
  solve_cmd->add_flag("--json", solve_json, "print the decomposition as a JSON record");
  add_common(solve_cmd, true);

  // sieve
  std::optional<u64> l_start, l_end, n_start, n_end;
  bool resume = false, progress = false;
  std::string report_path, csv_path;
  CLI::App* sieve_cmd = app.add_subcommand("sieve", "solve a whole index range");
  sieve_cmd->add_option("--l-start", l_start, "first l (n = 24l + 1)");
  sieve_cmd->add_option("--l-end", l_end, "last l (inclusive)");
  sieve_cmd->add_option("--n-start", n_start, "first n");
  sieve_cmd->add_option("--n-end", n_end, "last n (inclusive)");
  sieve_cmd->add_flag("--resume", resume, "reuse results already in the cache");
  sieve_cmd->add_flag("--progress", progress, "stream one JSON line per index to stdout");
  sieve_cmd->add_option("--report", report_path, "write the JSON report here");
  sieve_cmd->add_option("--csv", csv_path, "write the exception table as CSV");
  add_common(sieve_cmd, true);

  // verify
  std::vector<u64> verify_args;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check one triple exactly");
  verify_cmd->add_option("values", verify_args, "n x y z")->expected(4)->required();

  // oracle
  u64 oracle_n = 0;
  bool count_only = false;
  std::optional<u64> oracle_max;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "enumerate every canonical solution");
  oracle_cmd->add_option("n", oracle_n, "denominator, n >= 2")->required();
  oracle_cmd->add_flag("--count-only", count_only, "print only the solution count");
  oracle_cmd->add_option("--max", oracle_max, "stop after this many solutions");

  // parametric
  u64 par_p = 0;
  bool par_all = false, par_first = false;
  CLI::App* par_cmd = app.add_subcommand("parametric", "(w5, u5) witnesses for p = 1 (mod 4)");
  par_cmd->add_option("p", par_p, "p = 1 (mod 4)")->required();
  par_cmd->add_option("--w5-max", settings.cfg.w5_max, "w5 bound");
  par_cmd->add_option("--u5-max", settings.cfg.u5_max, "u5 bound");
  par_cmd->add_flag("--all", par_all, "list every witness (default)");
  par_cmd->add_flag("--first", par_first, "stop at the first witness");

  // families
  bool families_list = false;
  CLI::App* fam_cmd = app.add_subcommand("families", "closed-form family table");
  fam_cmd->add_flag("--list", families_list, "print the table (default action)");

  // golden
  CLI::App* golden_cmd = app.add_subcommand("golden", "check the 12 reference decompositions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (!methods_csv.empty()) settings.methods = parse_methods(methods_csv);
    if (solve_cmd->parsed()) return cmd_solve(settings, solve_n, solve_json);
    if (sieve_cmd->parsed()) {
      return cmd_sieve(settings, l_start, l_end, n_start, n_end, resume, progress, report_path,
                       csv_path, spf_overridden);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_args[0], verify_args[1], verify_args[2], verify_args[3]);
    }
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_n, count_only, oracle_max);
    if (par_cmd->parsed()) {
      if (par_all && par_first) throw CLI::ValidationError("parametric", "--all and --first conflict");
      return cmd_parametric(par_p, settings.cfg.w5_max, settings.cfg.u5_max, par_first);
    }
    if (fam_cmd->parsed()) return cmd_families();
    if (golden_cmd->parsed()) return cmd_golden();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const OverflowError& e) {
    std::cerr << "arithmetic width limit: " << e.what() << "\n";
    return kExitResourceLimit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotFound;
  }
  return kExitUsage;
}
