#include "mucgf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "mucgf/testexec.hpp"

namespace mucgf::report {

std::vector<ReplayRow> replay_corpus(const rundir::LoadedRun& run,
                                     const bench::BenchmarkCase& bench_case,
                                     const mut::MutantPool& pool,
                                     unsigned workers) {
  if (!run.info.pool_digest.empty() && !pool.mutants.empty() &&
      run.info.pool_digest != pool.program_digest)
    throw std::runtime_error("replay_corpus: pool digest mismatch (run was " +
                             run.info.pool_digest + ", pool is " +
                             pool.program_digest + ")");

  std::vector<const mut::Mutant*> all;
  all.reserve(pool.mutants.size());
  for (const auto& m : pool.mutants) all.push_back(&m);

  exec::RunConfig run_cfg;
  run_cfg.extra_time_ratio = run.info.config.extra_time_ratio;
  run_cfg.fuel_cap = run.info.config.fuel_cap;
  run_cfg.workers = workers;
  run_cfg.criterion = run.info.config.criterion;

  // Replay compares against an empty kill history, so new_kills is not
  // meaningful here; the verdicts are.
  mut::MutantPool empty_history;
  empty_history.program_digest = pool.program_digest;

  std::vector<ReplayRow> rows;
  rows.reserve(run.seeds.size());
  for (const auto& seed : run.seeds) {
    auto invocations = bench::decode_input(bench_case, seed.bytes);
    exec::Feedback fb =
        exec::run_all(bench_case.program, all, invocations, empty_history, run_cfg);
    ReplayRow row;
    row.seed_id = seed.id;
    row.time_ms = seed.time_ms;
    row.exec_index = seed.exec_index;
    row.coverage = std::move(fb.cov);
    for (const auto& v : fb.stat.verdicts)
      if (v.status == exec::VerdictStatus::Killed) row.kills.insert(v.mutant_id);
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

uint64_t count_conditionals(const std::vector<std::unique_ptr<ir::Stmt>>& body) {
  uint64_t n = 0;
  for (const auto& s : body) {
    if (s->kind == ir::StmtKind::If || s->kind == ir::StmtKind::While) ++n;
    n += count_conditionals(s->body);
    n += count_conditionals(s->else_body);
  }
  return n;
}

}  // namespace

uint64_t branch_edge_universe(const ir::Program& program) {
  uint64_t conditionals = 0;
  for (const auto& f : program.functions) conditionals += count_conditionals(f.body);
  return conditionals * 2;
}

BucketSpec parse_bucket_spec(const std::string& spec) {
  BucketSpec out;
  if (spec == "paper") {
    out.axis = BucketSpec::Axis::TimeMs;
    out.boundaries = {60'000, 600'000, 1'800'000, 3'600'000, 10'800'000};
    return out;
  }
  std::string rest;
  if (spec.rfind("time:", 0) == 0) {
    out.axis = BucketSpec::Axis::TimeMs;
    rest = spec.substr(5);
  } else if (spec.rfind("execs:", 0) == 0) {
    out.axis = BucketSpec::Axis::ExecIndex;
    rest = spec.substr(6);
  } else {
    throw std::runtime_error("bucket spec must be 'paper', 'time:...' or 'execs:...'");
  }
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t comma = rest.find(',', pos);
    std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                  : comma - pos);
    out.boundaries.push_back(std::stoull(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.boundaries.empty())
    throw std::runtime_error("bucket spec contains no boundaries");
  for (size_t i = 1; i < out.boundaries.size(); ++i)
    if (out.boundaries[i] <= out.boundaries[i - 1])
      throw std::runtime_error("bucket boundaries must be strictly increasing");
  return out;
}

std::string build_report_csv(const std::vector<std::string>& run_dirs,
                             const mut::MutantPool& pool, const BucketSpec& buckets,
                             unsigned workers) {
  if (run_dirs.empty()) throw std::runtime_error("report: no run directories");

  struct RepCurve {
    // Cumulative (coverage %, kill %) attached to each seed's time point.
    std::vector<std::pair<uint64_t, std::pair<double, double>>> points;
  };
  std::map<std::string, std::vector<RepCurve>> by_technique;
  std::string case_name;

  for (const auto& dir : run_dirs) {
    rundir::LoadedRun run = rundir::load_run(dir);
    if (case_name.empty()) case_name = run.info.case_name;
    else if (case_name != run.info.case_name)
      throw std::runtime_error("report: mixed cases across run dirs (" + case_name +
                               " vs " + run.info.case_name + ")");

    const bench::BenchmarkCase* bench_case = bench::find_case(run.info.case_name);
    if (!bench_case)
      throw std::runtime_error("report: unknown case " + run.info.case_name);

    const double cov_universe =
        static_cast<double>(branch_edge_universe(bench_case->program));
    const double pool_size = static_cast<double>(pool.mutants.size());

    auto rows = replay_corpus(run, *bench_case, pool, workers);
    RepCurve curve;
    ir::CoverageSet cum_cov;
    std::set<uint32_t> cum_kills;
    for (const auto& row : rows) {
      cum_cov.insert(row.coverage.begin(), row.coverage.end());
      cum_kills.insert(row.kills.begin(), row.kills.end());
      double cov_pct = cov_universe > 0
                           ? 100.0 * static_cast<double>(cum_cov.size()) / cov_universe
                           : 0.0;
      double kill_pct = pool_size > 0
                            ? 100.0 * static_cast<double>(cum_kills.size()) / pool_size
                            : 0.0;
      uint64_t t = buckets.axis == BucketSpec::Axis::TimeMs ? row.time_ms
                                                            : row.exec_index;
      curve.points.push_back({t, {cov_pct, kill_pct}});
    }
    by_technique[fuzz::policy_name(run.info.config.policy)].push_back(std::move(curve));
  }

  // Most-recent-time-point attachment: at each bucket boundary, a rep
  // contributes the cumulative value of its latest point at or before it.
  auto value_at = [](const RepCurve& curve, uint64_t bucket) {
    std::pair<double, double> v{0.0, 0.0};
    for (const auto& [t, val] : curve.points) {
      if (t > bucket) break;
      v = val;
    }
    return v;
  };

  std::string csv = "technique,bucket,mean_branch_cov_pct,mean_kill_pct,rep_count\n";
  for (const auto& [technique, reps] : by_technique) {
    for (uint64_t bucket : buckets.boundaries) {
      double cov_sum = 0.0, kill_sum = 0.0;
      for (const auto& rep : reps) {
        auto [cov, kill] = value_at(rep, bucket);
        cov_sum += cov;
        kill_sum += kill;
      }
      double n = static_cast<double>(reps.size());
      char line[160];
      snprintf(line, sizeof(line), "%s,%llu,%.4f,%.4f,%zu\n", technique.c_str(),
               static_cast<unsigned long long>(bucket), cov_sum / n, kill_sum / n,
               reps.size());
      csv += line;
    }
  }
  return csv;
}

}  // namespace mucgf::report
