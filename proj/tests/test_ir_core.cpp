#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "mucgf/ast.hpp"
#include "mucgf/interp.hpp"
#include "mucgf/rng.hpp"
#include "mucgf/value.hpp"

using namespace mucgf;
using ir::Value;

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

ir::ExecutionResult run1(const ir::Program& p, const std::string& fn,
                         std::vector<Value> args, uint64_t fuel = 1'000'000,
                         ir::CoverageSet* cov = nullptr) {
  return ir::execute(p, {{fn, std::move(args)}}, fuel, cov);
}

}  // namespace

TEST_CASE("parse foo: one function, validated sites") {
  ir::Program p = ir::parse_program(kFoo);
  CHECK(p.functions.size() == 1);
  CHECK(p.find("foo") != nullptr);
  CHECK(p.find("foo")->params.size() == 2);
  CHECK(p.site_count > 0);
}

TEST_CASE("parse: empty body returns Unit") {
  ir::Program p = ir::parse_program("fn f() { }");
  auto r = run1(p, "f", {});
  REQUIRE(r.success());
  REQUIRE(r.outputs.size() == 1);
  CHECK(r.outputs[0].type() == ir::Type::Unit);
}

TEST_CASE("parse: malformed text rejected with position") {
  CHECK_THROWS_AS(ir::parse_program("fn f( {"), ir::ParseError);
  CHECK_THROWS_AS(ir::parse_program("fn f() -> int { return x; }"), ir::ParseError);
  CHECK_THROWS_AS(ir::parse_program("fn f() -> int { return 1.5; }"),
                  ir::ParseError);  // static type mismatch
}

TEST_CASE("execute foo: buggy original returns x on both branches") {
  ir::Program p = ir::parse_program(kFoo);

  auto r1 = run1(p, "foo", {Value::integer(1), Value::integer(2)});
  REQUIRE(r1.success());
  CHECK(r1.outputs[0] == Value::integer(1));  // should be 2; the planted bug

  ir::CoverageSet cov;
  auto r2 = run1(p, "foo", {Value::integer(2), Value::integer(1)}, 1'000'000, &cov);
  REQUIRE(r2.success());
  CHECK(r2.outputs[0] == Value::integer(2));
  bool has_true_edge = false;
  for (const auto& [site, outcome] : cov) has_true_edge |= outcome;
  CHECK(has_true_edge);
}

TEST_CASE("execute: crash kinds") {
  SUBCASE("integer division by zero") {
    ir::Program p = ir::parse_program("fn f(x: int) -> int { return 1 / x; }");
    auto r = run1(p, "f", {Value::integer(0)});
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::DivByZero);
    CHECK(r.outputs.empty());
  }
  SUBCASE("float division by zero") {
    ir::Program p = ir::parse_program("fn f(x: float) -> float { return 1.0 / x; }");
    auto r = run1(p, "f", {Value::floating(0.0)});
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::DivByZero);
  }
  SUBCASE("index out of bounds") {
    ir::Program p = ir::parse_program(
        "fn f() -> int { let a: int[] = int_array(2); return a[5]; }");
    auto r = run1(p, "f", {});
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::IndexOutOfBounds);
  }
  SUBCASE("assertion failure") {
    ir::Program p = ir::parse_program("fn f() { assert (false); }");
    auto r = run1(p, "f", {});
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::AssertionFailure);
  }
  SUBCASE("fuel exhaustion") {
    ir::Program p = ir::parse_program(
        "fn f() -> int { let i: int = 0; while (true) { i = i + 1; } return i; }");
    auto r = run1(p, "f", {}, 1000);
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::FuelExhausted);
    CHECK(r.fuel_used <= 1000 + 1);
  }
  SUBCASE("invocation signature mismatch is a TypeFault") {
    ir::Program p = ir::parse_program(kFoo);
    auto r = run1(p, "foo", {Value::integer(1)});
    REQUIRE_FALSE(r.success());
    CHECK(*r.crash == ir::CrashKind::TypeFault);
  }
}

TEST_CASE("execute: integer arithmetic wraps") {
  ir::Program p =
      ir::parse_program("fn f(x: int) -> int { return x + 1; }");
  auto r = run1(p, "f", {Value::integer(INT64_MAX)});
  REQUIRE(r.success());
  CHECK(r.outputs[0] == Value::integer(INT64_MIN));
}

TEST_CASE("execute: determinism over repeated runs") {
  ir::Program p = ir::parse_program(kFoo);
  Rng rng(42);
  for (int i = 0; i < 50; ++i) {
    int64_t x = static_cast<int64_t>(rng.next_u64());
    int64_t y = static_cast<int64_t>(rng.next_u64());
    ir::CoverageSet c1, c2;
    auto r1 = run1(p, "foo", {Value::integer(x), Value::integer(y)}, 1'000'000, &c1);
    auto r2 = run1(p, "foo", {Value::integer(x), Value::integer(y)}, 1'000'000, &c2);
    CHECK(r1.status == r2.status);
    CHECK(r1.fuel_used == r2.fuel_used);
    CHECK(r1.outputs == r2.outputs);
    CHECK(c1 == c2);
  }
}

TEST_CASE("execute: fuel monotonicity") {
  ir::Program p = ir::parse_program(
      "fn f(n: int) -> int { let i: int = 0; while (i < n) { i = i + 1; } return i; }");
  auto full = run1(p, "f", {Value::integer(20)});
  REQUIRE(full.success());

  // Larger cap never changes a SUCCESS result.
  auto wide = run1(p, "f", {Value::integer(20)}, full.fuel_used * 10);
  CHECK(wide.outputs == full.outputs);
  CHECK(wide.fuel_used == full.fuel_used);

  // A FuelExhausted run completes once given at least the completing fuel.
  auto starved = run1(p, "f", {Value::integer(20)}, full.fuel_used / 2);
  REQUIRE_FALSE(starved.success());
  CHECK(*starved.crash == ir::CrashKind::FuelExhausted);
  auto recovered = run1(p, "f", {Value::integer(20)}, full.fuel_used);
  CHECK(recovered.success());
}

TEST_CASE("coverage: only conditional sites, both outcomes reachable") {
  ir::Program p = ir::parse_program(
      "fn f(n: int) -> int { let i: int = 0; while (i < n) { i = i + 1; } return i; }");
  ir::CoverageSet cov;
  run1(p, "f", {Value::integer(3)}, 1'000'000, &cov);
  REQUIRE(cov.size() == 2);  // one conditional, both outcomes
  auto it = cov.begin();
  CHECK(it->first == std::next(it)->first);
}

TEST_CASE("canonical_serialize: pinned encodings") {
  SUBCASE("[Int 1]") {
    auto bytes = ir::canonical_serialize({Value::integer(1)});
    std::vector<uint8_t> expected = {0, 0, 0, 1,  // count
                                     0x01, 0, 0, 0, 0, 0, 0, 0, 1};
    CHECK(bytes == expected);
  }
  SUBCASE("empty list is the count prefix only") {
    CHECK(ir::canonical_serialize({}) == std::vector<uint8_t>{0, 0, 0, 0});
  }
  SUBCASE("all NaN payloads collapse to the canonical quiet NaN") {
    double nan1 = std::numeric_limits<double>::quiet_NaN();
    uint64_t weird_bits = 0x7ff0000000000001ULL;  // a signaling-NaN payload
    double nan2;
    std::memcpy(&nan2, &weird_bits, 8);
    REQUIRE(std::isnan(nan2));
    CHECK(ir::canonical_serialize({Value::floating(nan1)}) ==
          ir::canonical_serialize({Value::floating(nan2)}));
  }
  SUBCASE("tags") {
    CHECK(ir::canonical_serialize({Value::unit()})[4] == 0x00);
    CHECK(ir::canonical_serialize({Value::integer(0)})[4] == 0x01);
    CHECK(ir::canonical_serialize({Value::floating(0)})[4] == 0x02);
    CHECK(ir::canonical_serialize({Value::boolean(true)})[4] == 0x03);
    CHECK(ir::canonical_serialize({Value::int_array({})})[4] == 0x04);
    CHECK(ir::canonical_serialize({Value::float_array({})})[4] == 0x05);
  }
}

TEST_CASE("canonical serialization round-trips random values") {
  Rng rng(7);
  auto random_value = [&rng]() {
    switch (rng.below(5)) {
      case 0: return Value::boolean(rng.below(2) == 1);
      case 1: return Value::integer(static_cast<int64_t>(rng.next_u64()));
      case 2: return Value::floating(static_cast<double>(rng.next_u64()) / 3.0);
      case 3: {
        std::vector<int64_t> xs(rng.below(8));
        for (auto& x : xs) x = static_cast<int64_t>(rng.next_u64());
        return Value::int_array(std::move(xs));
      }
      default: {
        std::vector<double> xs(rng.below(8));
        for (auto& x : xs) x = static_cast<double>(rng.next_u64()) * 0.5;
        return Value::float_array(std::move(xs));
      }
    }
  };
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Value> values(rng.below(4));
    for (auto& v : values) v = random_value();
    auto bytes = ir::canonical_serialize(values);
    auto back = ir::canonical_deserialize(bytes);
    REQUIRE(back.size() == values.size());
    for (size_t i = 0; i < values.size(); ++i) CHECK(back[i] == values[i]);
    // Injectivity direction: re-serializing gives the same bytes.
    CHECK(ir::canonical_serialize(back) == bytes);
  }
}

TEST_CASE("canonical_deserialize rejects malformed bytes") {
  CHECK_THROWS(ir::canonical_deserialize({}));
  CHECK_THROWS(ir::canonical_deserialize({0, 0, 0, 1}));        // missing value
  CHECK_THROWS(ir::canonical_deserialize({0, 0, 0, 1, 0x09})); // bad tag
}

TEST_CASE("print_program: canonical text re-parses to the same digest") {
  for (const char* text :
       {kFoo, "fn f(n: int) -> int { let i: int = 0; while (i < n) { i = i + 1; } return i; }",
        "fn g(x: float) -> float { return -x * 2.5; }"}) {
    ir::Program p = ir::parse_program(text);
    std::string printed = ir::print_program(p);
    ir::Program again = ir::parse_program(printed);
    CHECK(ir::print_program(again) == printed);
    CHECK(ir::program_digest(again) == ir::program_digest(p));
  }
}
