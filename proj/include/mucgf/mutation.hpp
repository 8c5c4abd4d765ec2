#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mucgf/ast.hpp"
#include "mucgf/rng.hpp"

namespace mucgf::mut {

enum class MutatorKind : uint8_t {
  ReturnZero,
  NegateConditional,
  ConditionalBoundary,
  MathOpReplace,
  IncrementFlip,
  InvertNegative,
};

std::string mutator_name(MutatorKind k);
std::optional<MutatorKind> mutator_from_name(const std::string& name);
std::vector<MutatorKind> all_mutators();

struct MutationSite {
  std::string function;
  uint32_t site_id = 0;
  std::string node_kind;  // "return" | "comparison" | "math_op" | "increment" | "negation"
  std::vector<MutatorKind> applicable;
};

// Deterministic preorder list of sites eligible for at least one mutator.
std::vector<MutationSite> enumerate_sites(const ir::Program& program);

struct Mutant {
  uint32_t id = 0;
  std::string function;
  uint32_t site_id = 0;
  MutatorKind mutator = MutatorKind::ReturnZero;
  ir::Program program;
};

struct MutantPool {
  std::string program_digest;
  std::vector<Mutant> mutants;
  std::set<uint32_t> killed;

  size_t size() const { return mutants.size(); }
};

struct MutationConfig {
  std::vector<MutatorKind> enabled = all_mutators();
  std::string strategy = "basic_random";
  uint32_t mutants_per_exec = 10;
};

// Rewrites the single node at `site_id` in `function`, returning a fresh
// validated program. Throws std::runtime_error when the mutator does not
// apply at that site.
ir::Program apply_mutator(const ir::Program& program, const std::string& function,
                          uint32_t site_id, MutatorKind mutator);

// One mutant per site x applicable enabled mutator, ordered by
// (site id, mutator name), then deduplicated. Mutants whose canonical text
// equals the original are dropped (the rewrite was a no-op there).
MutantPool build_mutant_pool(const ir::Program& program, const MutationConfig& config);

// Collapses byte-identical mutant programs to the lowest-id representative
// and re-densifies ids. Idempotent.
MutantPool dedupe(MutantPool pool);

// BasicRandom: min(k, |pool|) distinct mutants uniformly without
// replacement. Killed mutants stay eligible.
std::vector<const Mutant*> select_mutants(const MutantPool& pool,
                                          const MutationConfig& config, Rng& rng);

// Merges freshly observed kills into the pool; returns the ids that were
// not already killed. Throws on unknown ids.
std::set<uint32_t> update_kill_statuses(MutantPool& pool,
                                        const std::set<uint32_t>& killed_now);

// killed / (killed + survived) * 100. Rejects the 0/0 case.
double mutation_score(uint64_t killed, uint64_t survived);

// Versioned pool persistence (JSON).
std::string pool_to_json(const MutantPool& pool);
MutantPool pool_from_json(const std::string& json_text);

}  // namespace mucgf::mut
