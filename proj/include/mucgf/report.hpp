#pragma once

#include <set>
#include <string>
#include <vector>

#include "mucgf/bench.hpp"
#include "mucgf/mutation.hpp"
#include "mucgf/rundir.hpp"

namespace mucgf::report {

struct ReplayRow {
  uint32_t seed_id = 0;
  uint64_t time_ms = 0;
  uint64_t exec_index = 0;
  ir::CoverageSet coverage;
  std::set<uint32_t> kills;  // against the full pool
};

// Re-executes every saved seed in discovery order against the PUT and the
// full mutant pool. Throws when the run's pool digest does not match.
std::vector<ReplayRow> replay_corpus(const rundir::LoadedRun& run,
                                     const bench::BenchmarkCase& bench_case,
                                     const mut::MutantPool& pool,
                                     unsigned workers = 1);

// Total statically present branch edges (two per conditional site).
uint64_t branch_edge_universe(const ir::Program& program);

struct BucketSpec {
  enum class Axis : uint8_t { TimeMs, ExecIndex } axis = Axis::TimeMs;
  std::vector<uint64_t> boundaries;  // strictly increasing
};

// Parses "time:1000,5000" / "execs:100,1000" / the "paper" preset
// (1m/10m/30m/1h/3h in ms).
BucketSpec parse_bucket_spec(const std::string& spec);

// Replays every run dir, groups by technique (policy), buckets by
// most-recent-time-point attachment and averages across repetitions.
// Columns: technique,bucket,mean_branch_cov_pct,mean_kill_pct,rep_count
std::string build_report_csv(const std::vector<std::string>& run_dirs,
                             const mut::MutantPool& pool, const BucketSpec& buckets,
                             unsigned workers = 1);

}  // namespace mucgf::report
