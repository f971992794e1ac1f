// Batch driver for the verification suites: runs selected suites over a
// prime range on a worker pool, producing one JSON record per (suite, p)
// with a structured violation list, plus JSON Lines and CSV summaries on
// disk.  Records are byte-identical for a fixed seed, independent of the
// worker count: every task derives its own RNG stream from (seed, suite, p)
// and writes into a preassigned slot.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace markoff::runner {

using u64 = std::uint64_t;

inline constexpr int kSchemaVersion = 1;

enum class Suite {
  Enumerate,
  Components,
  Incidence,
  Cage,
  Counting,
  Stepanov,
  Opening,
  Smoothness,
};

const std::vector<Suite>& all_suites();
std::string suite_name(Suite s);
std::optional<Suite> suite_from_name(const std::string& name);

struct RunConfig {
  u64 p_min = 3;
  u64 p_max = 3;         // p_min > p_max is an empty range, not an error
  std::vector<Suite> suites;
  unsigned workers = 1;
  std::string out_dir;      // empty: keep the report in memory only
  std::string cache_path;   // factorization cache; the MARKOFF_FACTOR_CACHE
                            // environment variable overrides this
  u64 seed = 0;
};

struct PrimeRecord {
  Suite suite = Suite::Enumerate;
  u64 p = 0;
  nlohmann::json data;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

struct RunReport {
  std::vector<PrimeRecord> records;  // sorted by (suite, p)
  u64 violation_count() const;
  bool all_ok() const { return violation_count() == 0; }
};

// The RNG stream for one task; exposed so tests can pin determinism.
u64 task_seed(u64 seed, Suite s, u64 p);

// Validates the config (p_min >= 3, workers >= 1), runs every selected
// (suite, prime) task, and writes files when out_dir is set.  Exceptions
// inside a task become violation records, never silent skips.
RunReport run(const RunConfig& config);

// 0 when every record is clean, 1 otherwise.
int exit_code(const RunReport& report);

// <suite>.jsonl and <suite>.csv under dir, which is created if needed.
void write_report(const RunReport& report, const std::string& dir);

// Concatenates JSON Lines report files, deduplicating by (suite, p); a
// record from a later path replaces an earlier one.  Throws
// std::runtime_error on a schema-version mismatch or unparseable line.
RunReport report_merge(const std::vector<std::string>& paths);

nlohmann::json record_to_json(const PrimeRecord& r);
PrimeRecord record_from_json(const nlohmann::json& j);

// One CSV line. The header depends only on the suite.
std::string csv_header(Suite s);
std::string csv_row(const PrimeRecord& r);

}  // namespace markoff::runner
