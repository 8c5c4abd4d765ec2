#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "mucgf/interp.hpp"
#include "mucgf/mutation.hpp"
#include "mucgf/value.hpp"

namespace mucgf::exec {

enum class VerdictStatus : uint8_t { Killed, Survived };
enum class VerdictReason : uint8_t { Crashed, OutputDiff, Timeout, Consistent };

struct MutantVerdict {
  uint32_t mutant_id = 0;
  VerdictStatus status = VerdictStatus::Survived;
  VerdictReason reason = VerdictReason::Consistent;
};

struct MutationStats {
  std::vector<uint32_t> selected;        // mutant ids, ascending
  std::vector<MutantVerdict> verdicts;   // ordered by mutant id
  bool capable = false;                  // >= 1 KILLED
  std::set<uint32_t> new_kills;          // killed now, never killed before
  bool analyzed = false;                 // false when the PUT crashed
};

struct Feedback {
  ir::CoverageSet cov;
  ir::ExecutionResult res;  // of the PUT
  MutationStats stat;
};

// Output-consistency contract. Default compares the canonical serialized
// bytes; float_eps compares floats within an absolute epsilon instead.
struct Criterion {
  enum class Kind : uint8_t { Bytes, FloatEps } kind = Kind::Bytes;
  double epsilon = 0.0;

  static Criterion bytes() { return {}; }
  static Criterion float_eps(double eps) { return {Kind::FloatEps, eps}; }

  bool consistent(const ir::Value& a, const ir::Value& b) const;
};

// t' = ceil(t * (1 + r)).
uint64_t mutant_budget(uint64_t put_fuel_used, double ratio);

// Differential check of one mutant result against the PUT result.
// Requires put.success().
MutantVerdict check_mutant(uint32_t mutant_id, const ir::ExecutionResult& put,
                           const ir::ExecutionResult& mut,
                           const Criterion& criterion);

struct RunConfig {
  double extra_time_ratio = 0.1;
  uint64_t fuel_cap = 1'000'000;
  unsigned workers = 1;  // 1 = sequential; mutants fan out on workers
  Criterion criterion = Criterion::bytes();
};

// Executes the PUT, then (on success) every selected mutant under the
// derived budget, and assembles the feedback triple. Verdicts are ordered
// by mutant id regardless of worker count. When the PUT crashes, mutants
// are skipped entirely and stat.analyzed stays false.
Feedback run_all(const ir::Program& program,
                 const std::vector<const mut::Mutant*>& mutants,
                 const std::vector<ir::BehaviorInvocation>& invocations,
                 const mut::MutantPool& pool, const RunConfig& config);

}  // namespace mucgf::exec
