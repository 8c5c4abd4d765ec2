#include "mucgf/fuzz.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace mucgf::fuzz {

std::string policy_name(Policy p) {
  switch (p) {
    case Policy::Baseline: return "baseline";
    case Policy::Generic: return "generic";
    case Policy::Negative: return "negative";
    case Policy::Positive: return "positive";
  }
  return "?";
}

std::optional<Policy> policy_from_name(const std::string& name) {
  if (name == "baseline") return Policy::Baseline;
  if (name == "generic") return Policy::Generic;
  if (name == "negative") return Policy::Negative;
  if (name == "positive") return Policy::Positive;
  return std::nullopt;
}

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::SeedSaved: return "SEED_SAVED";
    case EventKind::NewCov: return "NEW_COV";
    case EventKind::Kill: return "KILL";
    case EventKind::KillNew: return "KILL_NEW";
    case EventKind::Crash: return "CRASH";
  }
  return "?";
}

namespace {

std::string bytes_digest(const std::vector<uint8_t>& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

bool SeedQueue::contains(const std::vector<uint8_t>& bytes) const {
  return digests.count(bytes_digest(bytes)) > 0;
}

SeedEntry* SeedQueue::push(SeedEntry entry) {
  if (!digests.insert(bytes_digest(entry.bytes)).second) return nullptr;
  entries.push_back(std::move(entry));
  return &entries.back();
}

uint64_t mutation_chance(const SeedMarks& marks, Policy policy,
                         const CampaignConfig& config) {
  uint64_t n = config.base;
  if (marks.favored) n *= config.factor;
  switch (policy) {
    case Policy::Baseline:
      break;
    case Policy::Generic:
      if (marks.capable) n *= config.kill_factor;
      else n /= config.kill_factor;
      break;
    case Policy::Negative:
      if (marks.kills_new) n *= config.kill_new_factor;
      else if (marks.capable) n /= config.kill_factor;
      break;
    case Policy::Positive:
      if (marks.capable) n *= config.kill_factor;
      break;
  }
  return std::clamp(n, config.n_min, config.n_max);
}

std::vector<uint8_t> mutate_input(const std::vector<uint8_t>& parent,
                                  const SeedQueue& queue, Rng& rng) {
  constexpr size_t kMaxLen = 4096;
  std::vector<uint8_t> child = parent;
  if (child.empty()) child.push_back(rng.next_byte());

  uint64_t steps = rng.range(1, 8);
  for (uint64_t step = 0; step < steps; ++step) {
    switch (rng.below(7)) {
      case 0: {  // bit flip
        size_t bit = static_cast<size_t>(rng.below(child.size() * 8));
        child[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        break;
      }
      case 1: {  // byte set
        child[rng.below(child.size())] = rng.next_byte();
        break;
      }
      case 2: {  // byte arithmetic +-1..35
        size_t pos = static_cast<size_t>(rng.below(child.size()));
        uint8_t delta = static_cast<uint8_t>(rng.range(1, 35));
        if (rng.below(2)) child[pos] = static_cast<uint8_t>(child[pos] + delta);
        else child[pos] = static_cast<uint8_t>(child[pos] - delta);
        break;
      }
      case 3: {  // interesting value overwrite, big-endian
        static const int64_t kInteresting[] = {0, 1, -1, INT64_MAX, INT64_MIN};
        static const size_t kWidths[] = {1, 2, 4, 8};
        size_t width = kWidths[rng.below(4)];
        if (child.size() < width) width = 1;
        int64_t value = kInteresting[rng.below(5)];
        size_t pos = static_cast<size_t>(rng.below(child.size() - width + 1));
        for (size_t i = 0; i < width; ++i)
          child[pos + i] =
              static_cast<uint8_t>(value >> (8 * (width - 1 - i)));
        break;
      }
      case 4: {  // block duplicate
        size_t len = static_cast<size_t>(
            rng.range(1, std::min<uint64_t>(child.size(), 64)));
        size_t src = static_cast<size_t>(rng.below(child.size() - len + 1));
        size_t dst = static_cast<size_t>(rng.below(child.size() + 1));
        std::vector<uint8_t> block(child.begin() + src, child.begin() + src + len);
        child.insert(child.begin() + dst, block.begin(), block.end());
        break;
      }
      case 5: {  // block delete
        if (child.size() <= 1) break;
        size_t len = static_cast<size_t>(rng.range(1, child.size() - 1));
        size_t pos = static_cast<size_t>(rng.below(child.size() - len + 1));
        child.erase(child.begin() + pos, child.begin() + pos + len);
        break;
      }
      case 6: {  // splice with a random other seed (possibly itself)
        if (queue.entries.empty()) break;
        const auto& other =
            queue.entries[rng.below(queue.entries.size())].bytes;
        if (other.empty()) break;
        size_t keep = static_cast<size_t>(rng.below(child.size() + 1));
        size_t from = static_cast<size_t>(rng.below(other.size()));
        child.resize(keep);
        child.insert(child.end(), other.begin() + from, other.end());
        if (child.empty()) child.push_back(rng.next_byte());
        break;
      }
    }
    if (child.size() > kMaxLen) child.resize(kMaxLen);
  }
  if (child.empty()) child.push_back(rng.next_byte());
  return child;
}

void process_feedback(const std::vector<uint8_t>& child_bytes, int32_t parent_id,
                      const exec::Feedback& fb, CampaignState& state,
                      mut::MutantPool& pool, uint64_t time_ms) {
  SeedMarks marks;
  std::vector<ir::BranchEdge> fresh_edges;
  for (const auto& edge : fb.cov)
    if (!state.global_cov.count(edge)) fresh_edges.push_back(edge);

  std::vector<uint32_t> killed_ids;
  for (const auto& v : fb.stat.verdicts)
    if (v.status == exec::VerdictStatus::Killed) killed_ids.push_back(v.mutant_id);

  if (fb.stat.capable) {
    marks.capable = true;
    state.log.push_back({time_ms, state.exec_index, EventKind::Kill, -1, {},
                         killed_ids, std::nullopt});
    if (!fb.stat.new_kills.empty()) {
      marks.kills_new = true;
      mut::update_kill_statuses(pool, fb.stat.new_kills);
      state.log.push_back(
          {time_ms, state.exec_index, EventKind::KillNew, -1, {},
           {fb.stat.new_kills.begin(), fb.stat.new_kills.end()}, std::nullopt});
    }
  }

  bool save_for_cov = false;
  if (!fb.res.success()) {
    state.failures.push_back({state.next_failure_id++, child_bytes,
                              *fb.res.crash, state.exec_index, time_ms});
    state.log.push_back({time_ms, state.exec_index, EventKind::Crash, -1, {}, {},
                         fb.res.crash});
  } else if (!fresh_edges.empty()) {
    save_for_cov = true;
    marks.favored = true;
    for (const auto& edge : fresh_edges) state.global_cov.insert(edge);
    state.log.push_back({time_ms, state.exec_index, EventKind::NewCov, -1,
                         fresh_edges, {}, std::nullopt});
  }

  if (marks.capable || save_for_cov) {
    SeedEntry entry;
    entry.id = static_cast<uint32_t>(state.queue.entries.size());
    entry.bytes = child_bytes;
    entry.marks = marks;
    entry.parent = parent_id;
    entry.exec_index = state.exec_index;
    entry.time_ms = time_ms;
    if (save_for_cov) entry.responsible_edges = fresh_edges;
    if (SeedEntry* saved = state.queue.push(std::move(entry))) {
      state.log.push_back({time_ms, state.exec_index, EventKind::SeedSaved,
                           static_cast<int32_t>(saved->id), {}, {}, std::nullopt});
    }
  }
}

CampaignResult fuzz_campaign(
    const ir::Program& program,
    const std::function<std::vector<ir::BehaviorInvocation>(
        const std::vector<uint8_t>&)>& decode,
    mut::MutantPool& pool, const CampaignConfig& config) {
  if (!config.max_execs && !config.duration_ms)
    throw std::runtime_error("fuzz_campaign: no budget configured");
  if (config.duration_ms && *config.duration_ms == 0)
    throw std::runtime_error("fuzz_campaign: duration budget must be positive");
  if (config.uses_mutants() && pool.mutants.empty())
    throw std::runtime_error(
        "fuzz_campaign: mutation-aware policy requires a non-empty mutant pool");

  Rng rng(config.rng_seed);
  CampaignState state;
  uint64_t total_fuel = 0;

  // Initial corpus: one rng-derived 64-byte seed.
  SeedEntry initial;
  initial.id = 0;
  initial.bytes.resize(64);
  for (auto& b : initial.bytes) b = rng.next_byte();
  state.queue.push(std::move(initial));

  mut::MutationConfig select_cfg;
  select_cfg.mutants_per_exec = config.mutants_per_exec;

  exec::RunConfig run_cfg;
  run_cfg.extra_time_ratio = config.extra_time_ratio;
  run_cfg.fuel_cap = config.fuel_cap;
  run_cfg.workers = config.workers;
  run_cfg.criterion = config.criterion;

  const auto start = std::chrono::steady_clock::now();
  auto wall_ms = [&start] {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count());
  };
  auto exhausted = [&] {
    if (config.max_execs && state.exec_index >= *config.max_execs) return true;
    if (config.duration_ms && wall_ms() >= *config.duration_ms) return true;
    return false;
  };

  bool done = exhausted();
  for (size_t qi = 0; !done; qi = (qi + 1) % state.queue.entries.size()) {
    // Entries may be appended (and the vector reallocated) while this seed
    // is being fuzzed; take copies of what the inner loop needs.
    const std::vector<uint8_t> parent_bytes = state.queue.entries[qi].bytes;
    const SeedMarks parent_marks = state.queue.entries[qi].marks;
    const int32_t parent_id = static_cast<int32_t>(state.queue.entries[qi].id);

    uint64_t n = mutation_chance(parent_marks, config.policy, config);
    for (uint64_t c = 0; c < n; ++c) {
      if (exhausted()) {
        done = true;
        break;
      }
      std::vector<uint8_t> child = mutate_input(parent_bytes, state.queue, rng);
      auto invocations = decode(child);
      std::vector<const mut::Mutant*> selected;
      if (config.uses_mutants())
        selected = mut::select_mutants(pool, select_cfg, rng);
      exec::Feedback fb = exec::run_all(program, selected, invocations, pool, run_cfg);

      total_fuel += fb.res.fuel_used;
      state.virtual_time_ms = total_fuel / 1000;
      uint64_t time_ms = config.duration_ms ? wall_ms() : state.virtual_time_ms;

      process_feedback(child, parent_id, fb, state, pool, time_ms);
      ++state.exec_index;
    }
  }

  CampaignResult result;
  result.queue = std::move(state.queue);
  result.failures = std::move(state.failures);
  result.log = std::move(state.log);
  result.global_cov = std::move(state.global_cov);
  result.total_execs = state.exec_index;
  return result;
}

}  // namespace mucgf::fuzz
