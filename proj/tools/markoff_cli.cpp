// Command-line front end for the verification suites.
//
//   markoff <suite|all> --primes 5..199 [--workers N] [--out DIR]
//                       [--cache FILE] [--seed S]
//   markoff merge REPORT.jsonl... [--out DIR]
//
// Exit codes: 0 all records clean, 1 at least one violation, 2 usage or
// configuration error.  The MARKOFF_FACTOR_CACHE environment variable
// overrides --cache.

#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "markoff/runner.hpp"

namespace {

using namespace markoff::runner;

bool parse_range(const std::string& text, u64& lo, u64& hi) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoull(text, &used);
      return used == text.size();
    }
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    lo = std::stoull(a, &used);
    if (used != a.size()) return false;
    hi = std::stoull(b, &used);
    return used == b.size();
  } catch (const std::exception&) {
    return false;
  }
}

void print_summary(const RunReport& report) {
  std::map<Suite, std::pair<u64, u64>> by_suite;  // records, violations
  for (const auto& r : report.records) {
    auto& [n, v] = by_suite[r.suite];
    ++n;
    v += r.violations.size();
  }
  for (const auto& [suite, nv] : by_suite)
    std::printf("%-12s %6llu records %6llu violations\n",
                suite_name(suite).c_str(), (unsigned long long)nv.first,
                (unsigned long long)nv.second);
  for (const auto& r : report.records)
    for (const auto& v : r.violations)
      std::printf("  %s p=%llu: %s\n", suite_name(r.suite).c_str(),
                  (unsigned long long)r.p, v.c_str());
  std::printf("total        %6zu records %6llu violations\n",
              report.records.size(),
              (unsigned long long)report.violation_count());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for Markoff triples modulo p"};
  app.require_subcommand(1);

  std::string primes = "3..3";
  RunConfig cfg;
  std::vector<std::string> merge_paths;
  std::string merge_out;
  std::vector<std::pair<CLI::App*, std::vector<Suite>>> run_cmds;

  auto add_run_cmd = [&](const std::string& name, const std::string& desc,
                         std::vector<Suite> suites) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--primes,-p", primes,
                    "prime range a..b or a single prime");
    cmd->add_option("--workers,-j", cfg.workers, "worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out,-o", cfg.out_dir, "directory for report files");
    cmd->add_option("--cache", cfg.cache_path, "factorization cache file");
    cmd->add_option("--seed", cfg.seed, "seed for the sampled checks");
    run_cmds.emplace_back(cmd, std::move(suites));
  };

  add_run_cmd("enumerate", "surface point counts", {Suite::Enumerate});
  add_run_cmd("components", "orbit components", {Suite::Components});
  add_run_cmd("incidence", "conic incidence graph", {Suite::Incidence});
  add_run_cmd("cage", "maximal-order cage", {Suite::Cage});
  add_run_cmd("counting", "subgroup and trace counts", {Suite::Counting});
  add_run_cmd("stepanov", "auxiliary-polynomial bounds", {Suite::Stepanov});
  add_run_cmd("opening", "rotation-order lower bound", {Suite::Opening});
  add_run_cmd("smoothness", "smooth-part thresholds", {Suite::Smoothness});
  add_run_cmd("all", "every suite", all_suites());

  CLI::App* merge_cmd =
      app.add_subcommand("merge", "merge JSON Lines report files");
  merge_cmd->add_option("paths", merge_paths, "report files, later paths win")
      ->required()
      ->expected(-1);
  merge_cmd->add_option("--out,-o", merge_out,
                        "directory for the merged report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help and version are not errors
  }

  try {
    if (merge_cmd->parsed()) {
      const auto merged = report_merge(merge_paths);
      if (!merge_out.empty()) write_report(merged, merge_out);
      print_summary(merged);
      return exit_code(merged);
    }
    for (const auto& [cmd, suites] : run_cmds) {
      if (!cmd->parsed()) continue;
      if (!parse_range(primes, cfg.p_min, cfg.p_max)) {
        std::fprintf(stderr, "bad prime range: %s\n", primes.c_str());
        return 2;
      }
      cfg.suites = suites;
      const auto report = run(cfg);
      print_summary(report);
      return exit_code(report);
    }
    std::fprintf(stderr, "no subcommand\n");
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
