#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mucgf/bench.hpp"
#include "mucgf/fuzz.hpp"
#include "mucgf/rundir.hpp"

using namespace mucgf;
using ir::Value;

namespace {

fuzz::SeedMarks marks(bool favored, bool capable, bool kills_new) {
  return {favored, capable, kills_new};
}

mut::MutantPool foo_pool() {
  mut::MutationConfig cfg;
  cfg.enabled = {mut::MutatorKind::ReturnZero, mut::MutatorKind::NegateConditional};
  return mut::build_mutant_pool(bench::find_case("foo")->program, cfg);
}

std::function<std::vector<ir::BehaviorInvocation>(const std::vector<uint8_t>&)>
decoder_for(const bench::BenchmarkCase& c) {
  return [&c](const std::vector<uint8_t>& bytes) { return bench::decode_input(c, bytes); };
}

std::string log_text(const fuzz::EventLog& log) {
  std::string out;
  for (const auto& e : log) out += rundir::event_to_json(e) + "\n";
  return out;
}

}  // namespace

TEST_CASE("mutation_chance: pinned arithmetic") {
  fuzz::CampaignConfig cfg;  // BASE=50, all factors 20, clamp [1, 10000]

  CHECK(fuzz::mutation_chance(marks(true, false, false), fuzz::Policy::Baseline, cfg) == 1000);
  CHECK(fuzz::mutation_chance(marks(false, false, false), fuzz::Policy::Baseline, cfg) == 50);
  CHECK(fuzz::mutation_chance(marks(false, false, false), fuzz::Policy::Generic, cfg) == 2);
  CHECK(fuzz::mutation_chance(marks(false, true, false), fuzz::Policy::Generic, cfg) == 1000);
  CHECK(fuzz::mutation_chance(marks(true, true, false), fuzz::Policy::Positive, cfg) == 10000);
  CHECK(fuzz::mutation_chance(marks(false, false, false), fuzz::Policy::Positive, cfg) == 50);
  CHECK(fuzz::mutation_chance(marks(false, true, true), fuzz::Policy::Negative, cfg) == 1000);
  CHECK(fuzz::mutation_chance(marks(false, true, false), fuzz::Policy::Negative, cfg) == 2);
  CHECK(fuzz::mutation_chance(marks(false, false, false), fuzz::Policy::Negative, cfg) == 50);
}

TEST_CASE("mutation_chance: BASELINE ignores kill marks; clamping; ordering") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    fuzz::CampaignConfig cfg;
    cfg.base = rng.range(1, 200);
    cfg.factor = rng.range(1, 40);
    cfg.kill_factor = rng.range(1, 40);
    cfg.kill_new_factor = rng.range(1, 40);
    bool favored = rng.below(2);

    uint64_t base_n = fuzz::mutation_chance(marks(favored, false, false),
                                            fuzz::Policy::Baseline, cfg);
    // Toggling kill marks never changes BASELINE.
    CHECK(fuzz::mutation_chance(marks(favored, true, true), fuzz::Policy::Baseline, cfg) ==
          base_n);
    CHECK(base_n >= cfg.n_min);
    CHECK(base_n <= cfg.n_max);
    // Favored seeds: POSITIVE-capable >= BASELINE >= GENERIC-incapable.
    CHECK(fuzz::mutation_chance(marks(true, true, false), fuzz::Policy::Positive, cfg) >=
          fuzz::mutation_chance(marks(true, false, false), fuzz::Policy::Baseline, cfg));
    CHECK(fuzz::mutation_chance(marks(true, false, false), fuzz::Policy::Baseline, cfg) >=
          fuzz::mutation_chance(marks(true, false, false), fuzz::Policy::Generic, cfg));
  }
}

TEST_CASE("mutate_input: determinism, totality, length bounds") {
  fuzz::SeedQueue queue;
  fuzz::SeedEntry seed;
  seed.bytes = {1, 2, 3, 4};
  queue.push(std::move(seed));

  SUBCASE("same rng state yields the identical child") {
    Rng a(10), b(10);
    std::vector<uint8_t> parent = {9, 8, 7};
    CHECK(fuzz::mutate_input(parent, queue, a) == fuzz::mutate_input(parent, queue, b));
  }
  SUBCASE("empty parent still yields a non-empty child") {
    Rng rng(1);
    for (int i = 0; i < 100; ++i)
      CHECK_FALSE(fuzz::mutate_input({}, queue, rng).empty());
  }
  SUBCASE("lengths stay in [1, 4096]") {
    Rng rng(2);
    std::vector<uint8_t> parent(4000, 0xab);
    for (int i = 0; i < 500; ++i) {
      auto child = fuzz::mutate_input(parent, queue, rng);
      CHECK(child.size() >= 1);
      CHECK(child.size() <= 4096);
      parent = child;
    }
  }
}

TEST_CASE("SeedQueue dedupes identical bytes") {
  fuzz::SeedQueue q;
  fuzz::SeedEntry a;
  a.id = 0;
  a.bytes = {1, 2, 3};
  CHECK(q.push(a) != nullptr);
  fuzz::SeedEntry dup;
  dup.id = 1;
  dup.bytes = {1, 2, 3};
  CHECK(q.push(dup) == nullptr);
  CHECK(q.entries.size() == 1);
  CHECK(q.contains({1, 2, 3}));
  CHECK_FALSE(q.contains({1, 2}));
}

TEST_CASE("process_feedback: the motivating scenario") {
  const bench::BenchmarkCase* foo = bench::find_case("foo");
  auto pool = foo_pool();
  std::vector<const mut::Mutant*> all;
  for (const auto& m : pool.mutants) all.push_back(&m);

  // i1-style inputs have already covered both branches of foo's conditional.
  fuzz::CampaignState state;
  for (auto args : {std::pair<int64_t, int64_t>{1, 1}, {2, 1}}) {
    ir::CoverageSet cov;
    ir::execute(foo->program,
                {{"foo", {Value::integer(args.first), Value::integer(args.second)}}},
                1'000'000, &cov);
    state.global_cov.insert(cov.begin(), cov.end());
  }
  REQUIRE(state.global_cov.size() == 2);

  // i2 = <1,2>: big-endian int32 pair per the foo decoder.
  std::vector<uint8_t> i2 = {0, 0, 0, 1, 0, 0, 0, 2};
  auto invocations = bench::decode_input(*foo, i2);
  exec::RunConfig run_cfg;

  SUBCASE("with mutation feedback, i2 is saved and marked capable") {
    auto fb = exec::run_all(foo->program, all, invocations, pool, run_cfg);
    REQUIRE(fb.stat.capable);
    fuzz::process_feedback(i2, 0, fb, state, pool, 5);
    REQUIRE(state.queue.entries.size() == 1);
    const auto& saved = state.queue.entries[0];
    CHECK(saved.bytes == i2);
    CHECK(saved.marks.capable);
    CHECK(saved.marks.kills_new);
    CHECK_FALSE(saved.marks.favored);  // no new coverage
    CHECK_FALSE(pool.killed.empty());

    bool saw_kill = false, saw_kill_new = false, saw_saved = false;
    for (const auto& e : state.log) {
      saw_kill |= e.kind == fuzz::EventKind::Kill;
      saw_kill_new |= e.kind == fuzz::EventKind::KillNew;
      saw_saved |= e.kind == fuzz::EventKind::SeedSaved;
    }
    CHECK(saw_kill);
    CHECK(saw_kill_new);
    CHECK(saw_saved);
  }

  SUBCASE("under BASELINE (no mutants selected), i2 is discarded") {
    auto fb = exec::run_all(foo->program, {}, invocations, pool, run_cfg);
    fuzz::process_feedback(i2, 0, fb, state, pool, 5);
    CHECK(state.queue.entries.empty());
    CHECK(state.log.empty());
  }

  SUBCASE("no new coverage, no kills, SUCCESS: no state change") {
    mut::MutantPool killed_pool = pool;
    for (const auto& m : killed_pool.mutants) killed_pool.killed.insert(m.id);
    // <0,-1> takes the then branch and returns 0, so even the then-branch
    // RETURN_ZERO mutant agrees: no mutant is killed.
    std::vector<uint8_t> i3 = {0, 0, 0, 0, 0xff, 0xff, 0xff, 0xff};
    auto fb = exec::run_all(foo->program, all, bench::decode_input(*foo, i3),
                            killed_pool, run_cfg);
    REQUIRE_FALSE(fb.stat.capable);
    fuzz::process_feedback(i3, 0, fb, state, killed_pool, 5);
    CHECK(state.queue.entries.empty());
    CHECK(state.failures.empty());
    CHECK(state.log.empty());
  }

  SUBCASE("crashing input goes to the fail set, not the queue") {
    ir::ExecutionResult res;
    res.status = ir::ExecStatus::Failure;
    res.crash = ir::CrashKind::DivByZero;
    exec::Feedback fb;
    fb.res = res;
    fuzz::process_feedback(i2, 0, fb, state, pool, 5);
    CHECK(state.queue.entries.empty());
    REQUIRE(state.failures.size() == 1);
    CHECK(state.failures[0].kind == ir::CrashKind::DivByZero);
    REQUIRE(state.log.size() == 1);
    CHECK(state.log[0].kind == fuzz::EventKind::Crash);
  }
}

TEST_CASE("fuzz_campaign: budgets and errors") {
  const bench::BenchmarkCase* foo = bench::find_case("foo");
  auto pool = foo_pool();

  SUBCASE("max_execs=0 returns the initial corpus unchanged, empty log") {
    fuzz::CampaignConfig cfg;
    cfg.max_execs = 0;
    cfg.rng_seed = 3;
    auto r = fuzz::fuzz_campaign(foo->program, decoder_for(*foo), pool, cfg);
    CHECK(r.total_execs == 0);
    CHECK(r.log.empty());
    REQUIRE(r.queue.entries.size() == 1);
    CHECK(r.queue.entries[0].bytes.size() == 64);
  }
  SUBCASE("no budget at all is a config error") {
    fuzz::CampaignConfig cfg;
    CHECK_THROWS(fuzz::fuzz_campaign(foo->program, decoder_for(*foo), pool, cfg));
  }
  SUBCASE("zero duration is a config error") {
    fuzz::CampaignConfig cfg;
    cfg.duration_ms = 0;
    CHECK_THROWS(fuzz::fuzz_campaign(foo->program, decoder_for(*foo), pool, cfg));
  }
  SUBCASE("mutation-aware policy with an empty pool is a config error") {
    fuzz::CampaignConfig cfg;
    cfg.max_execs = 10;
    cfg.policy = fuzz::Policy::Generic;
    mut::MutantPool empty;
    CHECK_THROWS(fuzz::fuzz_campaign(foo->program, decoder_for(*foo), empty, cfg));
  }
}

TEST_CASE("fuzz_campaign: determinism under an exec-count budget") {
  const bench::BenchmarkCase* foo = bench::find_case("foo");
  for (auto policy : {fuzz::Policy::Baseline, fuzz::Policy::Negative}) {
    fuzz::CampaignConfig cfg;
    cfg.policy = policy;
    cfg.rng_seed = 7;
    cfg.max_execs = 500;

    auto p1 = foo_pool();
    auto p2 = foo_pool();
    auto r1 = fuzz::fuzz_campaign(foo->program, decoder_for(*foo), p1, cfg);
    auto r2 = fuzz::fuzz_campaign(foo->program, decoder_for(*foo), p2, cfg);

    CHECK(log_text(r1.log) == log_text(r2.log));
    CHECK(p1.killed == p2.killed);
    REQUIRE(r1.queue.entries.size() == r2.queue.entries.size());
    for (size_t i = 0; i < r1.queue.entries.size(); ++i)
      CHECK(r1.queue.entries[i].bytes == r2.queue.entries[i].bytes);
    REQUIRE(r1.failures.size() == r2.failures.size());
    for (size_t i = 0; i < r1.failures.size(); ++i)
      CHECK(r1.failures[i].bytes == r2.failures[i].bytes);
  }
}

TEST_CASE("fuzz_campaign: monotonicity and membership over seeded mini-campaigns") {
  struct Setup {
    const char* case_name;
    fuzz::Policy policy;
  };
  const Setup setups[] = {
      {"foo", fuzz::Policy::Baseline},   {"foo", fuzz::Policy::Generic},
      {"foo", fuzz::Policy::Negative},   {"foo", fuzz::Policy::Positive},
      {"c01_sorting", fuzz::Policy::Baseline}, {"c01_sorting", fuzz::Policy::Negative},
      {"c05_div", fuzz::Policy::Positive},     {"c05_div", fuzz::Policy::Negative},
      {"c03_suffix_array", fuzz::Policy::Generic},
      {"c04_regression", fuzz::Policy::Negative},
  };
  uint64_t seed = 100;
  for (const auto& s : setups) {
    const bench::BenchmarkCase* c = bench::find_case(s.case_name);
    REQUIRE(c != nullptr);
    mut::MutationConfig mcfg;
    auto pool = mut::build_mutant_pool(c->program, mcfg);

    fuzz::CampaignConfig cfg;
    cfg.policy = s.policy;
    cfg.rng_seed = seed++;
    cfg.max_execs = 400;
    auto r = fuzz::fuzz_campaign(c->program, decoder_for(*c), pool, cfg);

    // NEW_COV events carry previously-unseen edges only; KILL_NEW ids are
    // first kills; exec_index and time are non-decreasing.
    ir::CoverageSet seen_edges;
    std::set<uint32_t> seen_kills;
    uint64_t last_exec = 0, last_time = 0;
    for (const auto& e : r.log) {
      CHECK(e.exec_index >= last_exec);
      CHECK(e.time_ms >= last_time);
      last_exec = e.exec_index;
      last_time = e.time_ms;
      if (e.kind == fuzz::EventKind::NewCov)
        for (const auto& edge : e.edges) CHECK(seen_edges.insert(edge).second);
      if (e.kind == fuzz::EventKind::KillNew)
        for (uint32_t id : e.mutant_ids) CHECK(seen_kills.insert(id).second);
    }
    CHECK(seen_edges == r.global_cov);
    CHECK(seen_kills == pool.killed);

    // Every seed beyond the initial corpus is favored or capable.
    for (size_t i = 1; i < r.queue.entries.size(); ++i) {
      const auto& entry = r.queue.entries[i];
      CHECK((entry.marks.favored || entry.marks.capable));
      CHECK(entry.id == i);
    }
  }
}
