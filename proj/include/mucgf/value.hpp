#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mucgf::ir {

enum class Type : uint8_t { Unit, Bool, Int, Float, IntArray, FloatArray };

std::string type_name(Type t);

// Runtime value of the mini-language. Arrays are copy-on-write: a write
// through a shared buffer clones it first, so values handed to an
// interpreter are never observably mutated by it.
class Value {
 public:
  Value() : tag_(Type::Unit) {}
  static Value unit() { return Value(); }
  static Value boolean(bool b) {
    Value v;
    v.tag_ = Type::Bool;
    v.b_ = b;
    return v;
  }
  static Value integer(int64_t i) {
    Value v;
    v.tag_ = Type::Int;
    v.i_ = i;
    return v;
  }
  static Value floating(double f) {
    Value v;
    v.tag_ = Type::Float;
    v.f_ = f;
    return v;
  }
  static Value int_array(std::vector<int64_t> xs) {
    Value v;
    v.tag_ = Type::IntArray;
    v.ints_ = std::make_shared<std::vector<int64_t>>(std::move(xs));
    return v;
  }
  static Value float_array(std::vector<double> xs) {
    Value v;
    v.tag_ = Type::FloatArray;
    v.floats_ = std::make_shared<std::vector<double>>(std::move(xs));
    return v;
  }

  Type type() const { return tag_; }
  bool as_bool() const { return b_; }
  int64_t as_int() const { return i_; }
  double as_float() const { return f_; }
  const std::vector<int64_t>& ints() const { return *ints_; }
  const std::vector<double>& floats() const { return *floats_; }

  std::vector<int64_t>& mutable_ints() {
    if (ints_.use_count() > 1)
      ints_ = std::make_shared<std::vector<int64_t>>(*ints_);
    return *ints_;
  }
  std::vector<double>& mutable_floats() {
    if (floats_.use_count() > 1)
      floats_ = std::make_shared<std::vector<double>>(*floats_);
    return *floats_;
  }

  // Structural equality with NaN treated as equal to NaN (matches the
  // canonical serialization, which normalizes every NaN payload).
  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  Type tag_;
  union {
    bool b_;
    int64_t i_ = 0;
    double f_;
  };
  std::shared_ptr<std::vector<int64_t>> ints_;
  std::shared_ptr<std::vector<double>> floats_;
};

enum class CrashKind : uint8_t {
  DivByZero,
  IndexOutOfBounds,
  AssertionFailure,
  FuelExhausted,
  TypeFault,
};

std::string crash_kind_name(CrashKind k);
std::optional<CrashKind> crash_kind_from_name(const std::string& name);

enum class ExecStatus : uint8_t { Success, Failure };

// Definition-4 style result: exactly one of outputs/crash is populated.
struct ExecutionResult {
  ExecStatus status = ExecStatus::Success;
  std::vector<Value> outputs;          // one per behavior, iff Success
  std::optional<CrashKind> crash;      // iff Failure
  uint64_t fuel_used = 0;

  bool success() const { return status == ExecStatus::Success; }
};

// Branch edge: (site id of the conditional, outcome taken).
using BranchEdge = std::pair<uint32_t, bool>;
using CoverageSet = std::set<BranchEdge>;

// Canonical byte encoding of an output list. Injective up to NaN
// normalization: every NaN is rewritten to the quiet NaN bit pattern
// 0x7ff8000000000000 before encoding.
std::vector<uint8_t> canonical_serialize(const std::vector<Value>& values);

// Inverse of canonical_serialize. Throws std::runtime_error on malformed
// bytes.
std::vector<Value> canonical_deserialize(const std::vector<uint8_t>& bytes);

}  // namespace mucgf::ir
