#pragma once

#include <string>
#include <vector>

#include "mucgf/ast.hpp"
#include "mucgf/value.hpp"

namespace mucgf::ir {

struct BehaviorInvocation {
  std::string function;
  std::vector<Value> args;
};

// Runs the invocations in order against `program`, charging one fuel unit
// per statement executed and expression evaluated. Stops at the first
// crash. Deterministic: identical arguments yield identical results.
ExecutionResult execute(const Program& program,
                        const std::vector<BehaviorInvocation>& invocations,
                        uint64_t fuel_cap, CoverageSet* coverage = nullptr);

}  // namespace mucgf::ir
