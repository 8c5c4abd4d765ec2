#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "mucgf/bench.hpp"
#include "mucgf/mutation.hpp"
#include "tree_diff.hpp"

using namespace mucgf;

namespace {

const char* kFoo = R"(
fn foo(x: int, y: int) -> int {
  if (x > y) {
    return x;
  } else {
    return x;
  }
}
)";

mut::MutantPool foo_pool(std::vector<mut::MutatorKind> mutators) {
  mut::MutationConfig cfg;
  cfg.enabled = std::move(mutators);
  return mut::build_mutant_pool(ir::parse_program(kFoo), cfg);
}

}  // namespace

TEST_CASE("enumerate_sites on foo: 1 comparison + 2 returns") {
  ir::Program p = ir::parse_program(kFoo);
  auto sites = mut::enumerate_sites(p);
  int comparisons = 0, returns = 0;
  for (const auto& s : sites) {
    if (s.node_kind == "comparison") ++comparisons;
    if (s.node_kind == "return") ++returns;
  }
  CHECK(comparisons == 1);
  CHECK(returns == 2);
}

TEST_CASE("enumerate_sites degenerate programs") {
  auto only_return = mut::enumerate_sites(ir::parse_program("fn f() -> int { return 0; }"));
  int returns = 0, comparisons = 0;
  for (const auto& s : only_return) {
    if (s.node_kind == "return") ++returns;
    if (s.node_kind == "comparison") ++comparisons;
  }
  CHECK(returns == 1);
  CHECK(comparisons == 0);

  CHECK(mut::enumerate_sites(ir::parse_program("fn f() { }")).empty());
}

TEST_CASE("build_mutant_pool on foo") {
  SUBCASE("RETURN_ZERO only: one mutant per return") {
    CHECK(foo_pool({mut::MutatorKind::ReturnZero}).mutants.size() == 2);
  }
  SUBCASE("RETURN_ZERO + NEGATE_CONDITIONAL: exactly 3") {
    auto pool = foo_pool({mut::MutatorKind::ReturnZero, mut::MutatorKind::NegateConditional});
    REQUIRE(pool.mutants.size() == 3);
    // dense ids, digest recorded
    for (size_t i = 0; i < pool.mutants.size(); ++i)
      CHECK(pool.mutants[i].id == i);
    CHECK(pool.program_digest == ir::program_digest(ir::parse_program(kFoo)));
  }
  SUBCASE("no applicable site: empty pool") {
    mut::MutationConfig cfg;
    CHECK(mut::build_mutant_pool(ir::parse_program("fn f() { }"), cfg).mutants.empty());
  }
}

TEST_CASE("every foo mutant differs from the original at exactly one site") {
  ir::Program original = ir::parse_program(kFoo);
  auto pool = foo_pool(mut::all_mutators());
  for (const auto& m : pool.mutants) {
    INFO("mutant ", m.id, " ", mut::mutator_name(m.mutator), " @", m.site_id);
    CHECK(tree_diff::diff_programs(original, m.program) == 1);
  }
}

TEST_CASE("apply_mutator rewrite rules") {
  ir::Program p = ir::parse_program(
      "fn f(a: int, b: int) -> bool { let c: int = a + b; return a > c; }");
  auto sites = mut::enumerate_sites(p);

  uint32_t math_site = 0, cmp_site = 0;
  for (const auto& s : sites) {
    if (s.node_kind == "math_op") math_site = s.site_id;
    if (s.node_kind == "comparison") cmp_site = s.site_id;
  }

  SUBCASE("MATH_OP_REPLACE: a + b -> a - b") {
    ir::Program m = mut::apply_mutator(p, "f", math_site, mut::MutatorKind::MathOpReplace);
    CHECK(ir::print_program(m).find("(a - b)") != std::string::npos);
  }
  SUBCASE("CONDITIONAL_BOUNDARY: a > c -> a >= c") {
    ir::Program m =
        mut::apply_mutator(p, "f", cmp_site, mut::MutatorKind::ConditionalBoundary);
    CHECK(ir::print_program(m).find("(a >= c)") != std::string::npos);
  }
  SUBCASE("NEGATE_CONDITIONAL: a > c -> a <= c") {
    ir::Program m =
        mut::apply_mutator(p, "f", cmp_site, mut::MutatorKind::NegateConditional);
    CHECK(ir::print_program(m).find("(a <= c)") != std::string::npos);
  }
  SUBCASE("inapplicable mutator rejected") {
    CHECK_THROWS(mut::apply_mutator(p, "f", math_site, mut::MutatorKind::ReturnZero));
  }
}

TEST_CASE("apply_mutator: INCREMENT_FLIP and INVERT_NEGATIVE") {
  ir::Program p = ir::parse_program("fn f(x: int) -> int { return -x + 1; }");
  auto sites = mut::enumerate_sites(p);
  bool saw_increment = false, saw_negation = false;
  for (const auto& s : sites) {
    if (s.node_kind == "increment") {
      saw_increment = true;
      ir::Program m = mut::apply_mutator(p, "f", s.site_id, mut::MutatorKind::IncrementFlip);
      CHECK(ir::print_program(m).find("- 1") != std::string::npos);
    }
    if (s.node_kind == "negation") {
      saw_negation = true;
      ir::Program m = mut::apply_mutator(p, "f", s.site_id, mut::MutatorKind::InvertNegative);
      CHECK(ir::print_program(m).find("-x") == std::string::npos);
    }
  }
  CHECK(saw_increment);
  CHECK(saw_negation);
}

TEST_CASE("pool determinism and type preservation across builtin cases") {
  mut::MutationConfig cfg;
  for (const auto& c : bench::builtin_cases()) {
    auto a = mut::build_mutant_pool(c.program, cfg);
    auto b = mut::build_mutant_pool(c.program, cfg);
    CHECK(mut::pool_to_json(a) == mut::pool_to_json(b));
    CHECK_FALSE(a.mutants.empty());
    for (const auto& m : a.mutants) {
      // Every mutant re-validates from its canonical text.
      CHECK_NOTHROW(ir::parse_program(ir::print_program(m.program)));
    }
  }
}

TEST_CASE("dedupe") {
  auto pool = foo_pool(mut::all_mutators());
  SUBCASE("idempotent") {
    auto once = mut::dedupe(pool);
    auto twice = mut::dedupe(once);
    CHECK(mut::pool_to_json(once) == mut::pool_to_json(twice));
  }
  SUBCASE("all-distinct pool unchanged") {
    auto three = foo_pool({mut::MutatorKind::ReturnZero, mut::MutatorKind::NegateConditional});
    CHECK(mut::dedupe(three).mutants.size() == 3);
  }
  SUBCASE("no byte-identical programs post-dedupe") {
    std::set<std::string> texts;
    for (const auto& m : pool.mutants)
      CHECK(texts.insert(ir::print_program(m.program)).second);
  }
}

TEST_CASE("select_mutants: BasicRandom") {
  const bench::BenchmarkCase* c01 = bench::find_case("c01_sorting");
  REQUIRE(c01 != nullptr);
  mut::MutationConfig cfg;
  auto pool = mut::build_mutant_pool(c01->program, cfg);
  REQUIRE(pool.mutants.size() >= 10);

  SUBCASE("k distinct ids") {
    Rng rng(3);
    auto sel = mut::select_mutants(pool, cfg, rng);
    REQUIRE(sel.size() == 10);
    std::set<uint32_t> ids;
    for (const auto* m : sel) ids.insert(m->id);
    CHECK(ids.size() == 10);
  }
  SUBCASE("clamped to pool size") {
    auto small = foo_pool({mut::MutatorKind::ReturnZero, mut::MutatorKind::NegateConditional});
    Rng rng(3);
    CHECK(mut::select_mutants(small, cfg, rng).size() == 3);
  }
  SUBCASE("deterministic under a fixed seed") {
    Rng r1(99), r2(99);
    auto a = mut::select_mutants(pool, cfg, r1);
    auto b = mut::select_mutants(pool, cfg, r2);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i]->id == b[i]->id);
  }
  SUBCASE("killed mutants stay eligible") {
    auto marked = pool;
    for (const auto& m : marked.mutants) marked.killed.insert(m.id);
    Rng rng(5);
    CHECK(mut::select_mutants(marked, cfg, rng).size() == 10);
  }
}

TEST_CASE("select_mutants uniformity: 1e4 draws, 20-mutant pool, k=1") {
  const bench::BenchmarkCase* c01 = bench::find_case("c01_sorting");
  mut::MutationConfig build_cfg;
  auto pool = mut::build_mutant_pool(c01->program, build_cfg);
  REQUIRE(pool.mutants.size() >= 20);
  pool.mutants.resize(20);

  mut::MutationConfig cfg;
  cfg.mutants_per_exec = 1;
  Rng rng(2024);
  std::map<uint32_t, int> freq;
  for (int i = 0; i < 10'000; ++i) freq[mut::select_mutants(pool, cfg, rng)[0]->id]++;
  REQUIRE(freq.size() == 20);
  for (const auto& [id, count] : freq) {
    INFO("mutant ", id, " drawn ", count, " times");
    CHECK(count >= 350);  // 500 - 30%
    CHECK(count <= 650);  // 500 + 30%
  }
}

TEST_CASE("update_kill_statuses") {
  auto pool = foo_pool({mut::MutatorKind::ReturnZero, mut::MutatorKind::NegateConditional});
  CHECK(mut::update_kill_statuses(pool, {0, 2}) == std::set<uint32_t>{0, 2});
  CHECK(pool.killed == std::set<uint32_t>{0, 2});
  CHECK(mut::update_kill_statuses(pool, {0}).empty());
  CHECK(pool.killed == std::set<uint32_t>{0, 2});
  CHECK(mut::update_kill_statuses(pool, {0, 1}) == std::set<uint32_t>{1});
  CHECK_THROWS(mut::update_kill_statuses(pool, {42}));
}

TEST_CASE("mutation_score") {
  CHECK(mut::mutation_score(3, 7) == doctest::Approx(30.0));
  CHECK(mut::mutation_score(0, 10) == doctest::Approx(0.0));
  CHECK(mut::mutation_score(1, 0) == doctest::Approx(100.0));
  CHECK_THROWS(mut::mutation_score(0, 0));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    uint64_t k = rng.below(50), s = rng.below(50);
    if (k + s == 0) continue;
    double score = mut::mutation_score(k, s);
    CHECK(score >= 0.0);
    CHECK(score <= 100.0);
    if (s == 0) CHECK(score == doctest::Approx(100.0));
    if (k == 0) CHECK(score == doctest::Approx(0.0));
  }
}

TEST_CASE("pool persistence round-trips") {
  auto pool = foo_pool(mut::all_mutators());
  pool.killed.insert(1);
  auto back = mut::pool_from_json(mut::pool_to_json(pool));
  CHECK(back.program_digest == pool.program_digest);
  CHECK(back.killed == pool.killed);
  REQUIRE(back.mutants.size() == pool.mutants.size());
  for (size_t i = 0; i < pool.mutants.size(); ++i) {
    CHECK(back.mutants[i].id == pool.mutants[i].id);
    CHECK(back.mutants[i].site_id == pool.mutants[i].site_id);
    CHECK(back.mutants[i].mutator == pool.mutants[i].mutator);
    CHECK(ir::print_program(back.mutants[i].program) ==
          ir::print_program(pool.mutants[i].program));
  }
}
