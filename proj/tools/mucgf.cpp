#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mucgf/bench.hpp"
#include "mucgf/fuzz.hpp"
#include "mucgf/mutation.hpp"
#include "mucgf/report.hpp"
#include "mucgf/rundir.hpp"

namespace {

using namespace mucgf;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

bench::BenchmarkCase resolve_case(const std::string& target,
                                  const std::string& decoder_path) {
  if (const bench::BenchmarkCase* c = bench::find_case(target)) return *c;
  if (target.size() > 3 && target.substr(target.size() - 3) == ".ir") {
    std::string decoder = decoder_path.empty()
                              ? target.substr(0, target.size() - 3) + ".decoder.json"
                              : decoder_path;
    return bench::load_case(target, decoder);
  }
  throw std::runtime_error("unknown case '" + target +
                           "' (not a builtin, not an .ir file)");
}

std::vector<mut::MutatorKind> parse_mutators(const std::string& list) {
  if (list.empty() || list == "all") return mut::all_mutators();
  std::vector<mut::MutatorKind> out;
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    std::string name = list.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto k = mut::mutator_from_name(name);
    if (!k) throw std::runtime_error("unknown mutator '" + name + "'");
    out.push_back(*k);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

uint64_t parse_duration_ms(const std::string& s) {
  size_t idx = 0;
  unsigned long long value = std::stoull(s, &idx);
  std::string unit = s.substr(idx);
  if (unit == "ms") return value;
  if (unit == "s" || unit.empty()) return value * 1000;
  if (unit == "m") return value * 60'000;
  if (unit == "h") return value * 3'600'000;
  throw std::runtime_error("bad duration '" + s + "' (use ms/s/m/h)");
}

exec::Criterion parse_criterion(const std::string& s) {
  if (s == "bytes") return exec::Criterion::bytes();
  if (s.rfind("float-eps:", 0) == 0)
    return exec::Criterion::float_eps(std::stod(s.substr(10)));
  throw std::runtime_error("bad criterion '" + s + "' (bytes | float-eps:<e>)");
}

uint64_t default_rng_seed() {
  if (const char* env = std::getenv("MUCGF_RNG_SEED")) return std::stoull(env);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mucgf: mutation-feedback coverage-guided fuzzer"};
  app.require_subcommand(1);

  // --- mutate ---
  auto* cmd_mutate = app.add_subcommand("mutate", "build a mutant pool offline");
  std::string mutate_target, mutate_mutators = "all", mutate_out = "pool.json";
  std::string mutate_decoder;
  cmd_mutate->add_option("--target", mutate_target, "builtin case or .ir file")
      ->required();
  cmd_mutate->add_option("--mutators", mutate_mutators, "comma list or 'all'");
  cmd_mutate->add_option("--decoder", mutate_decoder, "decoder json for .ir targets");
  cmd_mutate->add_option("--out", mutate_out, "pool output path");

  // --- fuzz ---
  auto* cmd_fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
  std::string fuzz_target, fuzz_policy = "baseline", fuzz_pool, fuzz_out = "run";
  std::string fuzz_duration, fuzz_criterion = "bytes", fuzz_decoder;
  fuzz::CampaignConfig cfg;
  int64_t fuzz_max_execs = -1;
  uint64_t fuzz_rng_seed = default_rng_seed();
  cmd_fuzz->add_option("--target", fuzz_target, "builtin case or .ir file")
      ->required();
  cmd_fuzz->add_option("--policy", fuzz_policy,
                       "baseline | generic | negative | positive");
  cmd_fuzz->add_option("--pool", fuzz_pool, "mutant pool (required for mu policies)");
  cmd_fuzz->add_option("--decoder", fuzz_decoder, "decoder json for .ir targets");
  cmd_fuzz->add_option("--out", fuzz_out, "run directory");
  cmd_fuzz->add_option("--duration", fuzz_duration, "wall-clock budget, e.g. 60s");
  cmd_fuzz->add_option("--max-execs", fuzz_max_execs, "execution-count budget");
  cmd_fuzz->add_option("--rng-seed", fuzz_rng_seed,
                       "rng seed (env MUCGF_RNG_SEED as fallback)");
  cmd_fuzz->add_option("--base", cfg.base, "energy base (default 50)");
  cmd_fuzz->add_option("--factor", cfg.factor, "favored multiplier (default 20)");
  cmd_fuzz->add_option("--kill-factor", cfg.kill_factor, "kill multiplier (default 20)");
  cmd_fuzz->add_option("--kill-new-factor", cfg.kill_new_factor,
                       "new-kill multiplier (default 20)");
  cmd_fuzz->add_option("--mutants-per-exec", cfg.mutants_per_exec,
                       "mutants sampled per execution (default 10)");
  cmd_fuzz->add_option("--extra-time-ratio", cfg.extra_time_ratio,
                       "mutant budget ratio r (default 0.1)");
  cmd_fuzz->add_option("--fuel-cap", cfg.fuel_cap, "PUT fuel cap per execution");
  cmd_fuzz->add_option("--workers", cfg.workers, "worker threads for mutants");
  cmd_fuzz->add_option("--criterion", fuzz_criterion, "bytes | float-eps:<e>");

  // --- replay ---
  auto* cmd_replay = app.add_subcommand("replay", "replay a run's corpus");
  std::string replay_run, replay_pool;
  unsigned replay_workers = 1;
  cmd_replay->add_option("--run", replay_run, "run directory")->required();
  cmd_replay->add_option("--pool", replay_pool, "mutant pool")->required();
  cmd_replay->add_option("--workers", replay_workers, "worker threads");

  // --- report ---
  auto* cmd_report = app.add_subcommand("report", "repetition-averaged CSV report");
  std::vector<std::string> report_runs;
  std::string report_pool, report_buckets = "paper", report_out;
  unsigned report_workers = 1;
  cmd_report->add_option("runs", report_runs, "run directories")->required();
  cmd_report->add_option("--pool", report_pool, "mutant pool")->required();
  cmd_report->add_option("--buckets", report_buckets,
                         "'paper' | time:ms,... | execs:n,...");
  cmd_report->add_option("--out", report_out, "CSV path (default: stdout)");
  cmd_report->add_option("--workers", report_workers, "worker threads");

  // --- dump-case / list-mutators ---
  auto* cmd_dump = app.add_subcommand("dump-case", "print a builtin case");
  std::string dump_name;
  cmd_dump->add_option("name", dump_name, "case name")->required();
  auto* cmd_list = app.add_subcommand("list-mutators", "list available mutators");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_mutate) {
      bench::BenchmarkCase c = resolve_case(mutate_target, mutate_decoder);
      mut::MutationConfig mc;
      mc.enabled = parse_mutators(mutate_mutators);
      mut::MutantPool pool = mut::build_mutant_pool(c.program, mc);
      if (pool.mutants.empty()) {
        std::cerr << "error: no applicable mutation sites in " << c.name << "\n";
        return 1;
      }
      spit(mutate_out, mut::pool_to_json(pool));
      std::cout << "pool: " << pool.mutants.size() << " mutants -> " << mutate_out
                << "\n";
      return 0;
    }

    if (*cmd_fuzz) {
      bench::BenchmarkCase c = resolve_case(fuzz_target, fuzz_decoder);
      auto policy = fuzz::policy_from_name(fuzz_policy);
      if (!policy) throw std::runtime_error("unknown policy '" + fuzz_policy + "'");
      cfg.policy = *policy;
      cfg.rng_seed = fuzz_rng_seed;
      cfg.criterion = parse_criterion(fuzz_criterion);
      if (fuzz_max_execs >= 0) cfg.max_execs = static_cast<uint64_t>(fuzz_max_execs);
      if (!fuzz_duration.empty()) cfg.duration_ms = parse_duration_ms(fuzz_duration);
      if (!cfg.max_execs && !cfg.duration_ms)
        throw std::runtime_error("fuzz: set --max-execs and/or --duration");

      mut::MutantPool pool;
      if (cfg.uses_mutants()) {
        if (fuzz_pool.empty())
          throw std::runtime_error("fuzz: policy '" + fuzz_policy +
                                   "' requires --pool");
        pool = mut::pool_from_json(slurp(fuzz_pool));
        if (pool.program_digest != ir::program_digest(c.program))
          throw std::runtime_error("fuzz: pool digest does not match target program");
      }

      auto decode = [&c](const std::vector<uint8_t>& bytes) {
        return bench::decode_input(c, bytes);
      };
      fuzz::CampaignResult result = fuzz::fuzz_campaign(c.program, decode, pool, cfg);
      rundir::save_run(fuzz_out, result, cfg, c.name, pool.program_digest);
      std::cout << "run: " << result.total_execs << " execs, "
                << result.queue.entries.size() << " seeds, "
                << result.failures.size() << " failures, "
                << pool.killed.size() << " mutants killed -> " << fuzz_out << "\n";
      return 0;  // finding crashes is success
    }

    if (*cmd_replay) {
      rundir::LoadedRun run = rundir::load_run(replay_run);
      const bench::BenchmarkCase* c = bench::find_case(run.info.case_name);
      if (!c) throw std::runtime_error("unknown case " + run.info.case_name);
      mut::MutantPool pool = mut::pool_from_json(slurp(replay_pool));
      auto rows = report::replay_corpus(run, *c, pool, replay_workers);
      std::cout << "seed_id,time_ms,exec_index,cov_edges,kills\n";
      for (const auto& row : rows) {
        std::cout << row.seed_id << "," << row.time_ms << "," << row.exec_index
                  << "," << row.coverage.size() << "," << row.kills.size() << "\n";
      }
      return 0;
    }

    if (*cmd_report) {
      mut::MutantPool pool = mut::pool_from_json(slurp(report_pool));
      report::BucketSpec buckets = report::parse_bucket_spec(report_buckets);
      std::string csv =
          report::build_report_csv(report_runs, pool, buckets, report_workers);
      if (report_out.empty()) std::cout << csv;
      else spit(report_out, csv);
      return 0;
    }

    if (*cmd_dump) {
      const bench::BenchmarkCase* c = bench::find_case(dump_name);
      if (!c) throw std::runtime_error("unknown case '" + dump_name + "'");
      std::cout << c->program_text << "\n--- decoder ---\n" << c->decoder_json << "\n";
      return 0;
    }

    if (*cmd_list) {
      for (mut::MutatorKind k : mut::all_mutators())
        std::cout << mut::mutator_name(k) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
