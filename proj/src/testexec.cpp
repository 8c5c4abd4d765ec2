#include "mucgf/testexec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace mucgf::exec {

bool Criterion::consistent(const ir::Value& a, const ir::Value& b) const {
  if (kind == Kind::Bytes) {
    return ir::canonical_serialize({a}) == ir::canonical_serialize({b});
  }
  // float_eps: tolerate absolute float differences, exact elsewhere.
  if (a.type() != b.type()) return false;
  auto close = [this](double x, double y) {
    if (std::isnan(x) && std::isnan(y)) return true;
    return std::abs(x - y) <= epsilon;
  };
  switch (a.type()) {
    case ir::Type::Float:
      return close(a.as_float(), b.as_float());
    case ir::Type::FloatArray: {
      const auto& xs = a.floats();
      const auto& ys = b.floats();
      if (xs.size() != ys.size()) return false;
      for (size_t i = 0; i < xs.size(); ++i)
        if (!close(xs[i], ys[i])) return false;
      return true;
    }
    default:
      return a == b;
  }
}

uint64_t mutant_budget(uint64_t put_fuel_used, double ratio) {
  // Absorb binary-representation noise (e.g. 100 * 1.1 = 110.0000...01)
  // so exact products are not bumped by the ceiling.
  return static_cast<uint64_t>(
      std::ceil(static_cast<double>(put_fuel_used) * (1.0 + ratio) - 1e-9));
}

MutantVerdict check_mutant(uint32_t mutant_id, const ir::ExecutionResult& put,
                           const ir::ExecutionResult& mut,
                           const Criterion& criterion) {
  MutantVerdict v;
  v.mutant_id = mutant_id;
  if (!mut.success()) {
    v.status = VerdictStatus::Killed;
    v.reason = mut.crash == ir::CrashKind::FuelExhausted ? VerdictReason::Timeout
                                                         : VerdictReason::Crashed;
    return v;
  }
  if (put.outputs.size() != mut.outputs.size()) {
    v.status = VerdictStatus::Killed;
    v.reason = VerdictReason::OutputDiff;
    return v;
  }
  for (size_t i = 0; i < put.outputs.size(); ++i) {
    if (!criterion.consistent(put.outputs[i], mut.outputs[i])) {
      v.status = VerdictStatus::Killed;
      v.reason = VerdictReason::OutputDiff;
      return v;
    }
  }
  v.status = VerdictStatus::Survived;
  v.reason = VerdictReason::Consistent;
  return v;
}

Feedback run_all(const ir::Program& program,
                 const std::vector<const mut::Mutant*>& mutants,
                 const std::vector<ir::BehaviorInvocation>& invocations,
                 const mut::MutantPool& pool, const RunConfig& config) {
  Feedback fb;
  fb.res = ir::execute(program, invocations, config.fuel_cap, &fb.cov);
  if (!fb.res.success()) return fb;  // mutation results not analyzed

  fb.stat.analyzed = true;
  std::vector<const mut::Mutant*> ordered(mutants);
  std::sort(ordered.begin(), ordered.end(),
            [](const mut::Mutant* a, const mut::Mutant* b) { return a->id < b->id; });
  for (const auto* m : ordered) fb.stat.selected.push_back(m->id);

  const uint64_t budget = mutant_budget(fb.res.fuel_used, config.extra_time_ratio);
  fb.stat.verdicts.resize(ordered.size());

  auto run_one = [&](size_t i) {
    ir::ExecutionResult mr = ir::execute(ordered[i]->program, invocations, budget);
    fb.stat.verdicts[i] = check_mutant(ordered[i]->id, fb.res, mr, config.criterion);
  };

  unsigned workers = std::max(1u, config.workers);
  if (workers == 1 || ordered.size() <= 1) {
    for (size_t i = 0; i < ordered.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= ordered.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> threads;
    unsigned n = std::min<unsigned>(workers, static_cast<unsigned>(ordered.size()));
    threads.reserve(n);
    for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  std::set<uint32_t> killed_now;
  for (const auto& v : fb.stat.verdicts)
    if (v.status == VerdictStatus::Killed) killed_now.insert(v.mutant_id);
  fb.stat.capable = !killed_now.empty();
  for (uint32_t id : killed_now)
    if (!pool.killed.count(id)) fb.stat.new_kills.insert(id);
  return fb;
}

}  // namespace mucgf::exec
