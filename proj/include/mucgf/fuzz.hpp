#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "mucgf/mutation.hpp"
#include "mucgf/rng.hpp"
#include "mucgf/testexec.hpp"

namespace mucgf::fuzz {

enum class Policy : uint8_t { Baseline, Generic, Negative, Positive };

std::string policy_name(Policy p);
std::optional<Policy> policy_from_name(const std::string& name);

struct CampaignConfig {
  uint64_t base = 50;
  uint64_t factor = 20;
  uint64_t kill_factor = 20;
  uint64_t kill_new_factor = 20;
  uint32_t mutants_per_exec = 10;  // k
  double extra_time_ratio = 0.1;   // r
  uint64_t fuel_cap = 1'000'000;
  uint64_t rng_seed = 0;
  std::optional<uint64_t> max_execs;    // execution-count budget
  std::optional<uint64_t> duration_ms;  // wall-clock budget; >= 1 required
  Policy policy = Policy::Baseline;
  uint64_t n_min = 1;
  uint64_t n_max = 10'000;
  unsigned workers = 1;
  exec::Criterion criterion = exec::Criterion::bytes();

  bool uses_mutants() const { return policy != Policy::Baseline; }
};

struct SeedMarks {
  bool favored = false;
  bool capable = false;
  bool kills_new = false;
};

struct SeedEntry {
  uint32_t id = 0;
  std::vector<uint8_t> bytes;
  SeedMarks marks;
  int32_t parent = -1;         // -1 for the initial corpus
  uint64_t exec_index = 0;     // execution count at discovery
  uint64_t time_ms = 0;        // wall (duration budget) or virtual (exec budget)
  std::vector<ir::BranchEdge> responsible_edges;
};

struct SeedQueue {
  std::vector<SeedEntry> entries;
  std::unordered_set<std::string> digests;  // byte-level dedupe

  bool contains(const std::vector<uint8_t>& bytes) const;
  // Returns the entry if inserted, nullptr on duplicate bytes.
  SeedEntry* push(SeedEntry entry);
};

struct Failure {
  uint32_t id = 0;
  std::vector<uint8_t> bytes;
  ir::CrashKind kind = ir::CrashKind::DivByZero;
  uint64_t exec_index = 0;
  uint64_t time_ms = 0;
};

using FailSet = std::vector<Failure>;

enum class EventKind : uint8_t { SeedSaved, NewCov, Kill, KillNew, Crash };

std::string event_kind_name(EventKind k);

struct Event {
  uint64_t time_ms = 0;
  uint64_t exec_index = 0;
  EventKind kind;
  int32_t seed_id = -1;
  std::vector<ir::BranchEdge> edges;   // NewCov
  std::vector<uint32_t> mutant_ids;    // Kill / KillNew
  std::optional<ir::CrashKind> crash;  // Crash
};

using EventLog = std::vector<Event>;

// Algorithms 2 / 4: energy as a pure function of the seed's marks.
uint64_t mutation_chance(const SeedMarks& marks, Policy policy,
                         const CampaignConfig& config);

// Havoc: 1-8 rng-chosen byte-level steps; result length in [1, 4096].
std::vector<uint8_t> mutate_input(const std::vector<uint8_t>& parent,
                                  const SeedQueue& queue, Rng& rng);

struct CampaignState {
  SeedQueue queue;
  FailSet failures;
  ir::CoverageSet global_cov;
  EventLog log;
  uint64_t exec_index = 0;
  uint64_t virtual_time_ms = 0;
  uint32_t next_failure_id = 0;
};

// Feedback processing per the fault-detection-aware loop: capable children
// are saved and marked; new kills update the pool; crashes go to the fail
// set; new coverage saves with the favored mark. A child that qualifies by
// both routes is stored once with both marks.
void process_feedback(const std::vector<uint8_t>& child_bytes, int32_t parent_id,
                      const exec::Feedback& fb, CampaignState& state,
                      mut::MutantPool& pool, uint64_t time_ms);

struct CampaignResult {
  SeedQueue queue;
  FailSet failures;
  EventLog log;
  ir::CoverageSet global_cov;
  uint64_t total_execs = 0;
};

// The campaign loop. `decode` turns child bytes into behavior invocations.
// Requires a non-empty pool for non-baseline policies and at least one
// budget. Deterministic for a fixed rng seed under an exec-count budget.
CampaignResult fuzz_campaign(
    const ir::Program& program,
    const std::function<std::vector<ir::BehaviorInvocation>(
        const std::vector<uint8_t>&)>& decode,
    mut::MutantPool& pool, const CampaignConfig& config);

}  // namespace mucgf::fuzz
