#include "mucgf/rundir.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;

namespace mucgf::rundir {

namespace {

std::string id_name(uint32_t id) {
  char buf[16];
  snprintf(buf, sizeof(buf), "id_%06u", id);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

void write_bytes(const fs::path& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<uint8_t> read_bytes(const fs::path& path) {
  std::string s = read_file(path);
  return {s.begin(), s.end()};
}

}  // namespace

std::string config_to_json(const fuzz::CampaignConfig& config,
                           const std::string& case_name,
                           const std::string& pool_digest) {
  nlohmann::json j;
  j["case"] = case_name;
  j["pool_digest"] = pool_digest;
  j["policy"] = fuzz::policy_name(config.policy);
  j["base"] = config.base;
  j["factor"] = config.factor;
  j["kill_factor"] = config.kill_factor;
  j["kill_new_factor"] = config.kill_new_factor;
  j["mutants_per_exec"] = config.mutants_per_exec;
  j["extra_time_ratio"] = config.extra_time_ratio;
  j["fuel_cap"] = config.fuel_cap;
  j["rng_seed"] = config.rng_seed;
  j["n_min"] = config.n_min;
  j["n_max"] = config.n_max;
  j["workers"] = config.workers;
  if (config.max_execs) j["max_execs"] = *config.max_execs;
  if (config.duration_ms) j["duration_ms"] = *config.duration_ms;
  j["criterion"] = config.criterion.kind == exec::Criterion::Kind::Bytes
                       ? "bytes"
                       : "float-eps:" + std::to_string(config.criterion.epsilon);
  return j.dump(2) + "\n";
}

RunConfigInfo config_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  RunConfigInfo info;
  info.case_name = j.at("case").get<std::string>();
  info.pool_digest = j.value("pool_digest", "");
  auto policy = fuzz::policy_from_name(j.at("policy").get<std::string>());
  if (!policy) throw std::runtime_error("config.json: unknown policy");
  info.config.policy = *policy;
  info.config.base = j.at("base").get<uint64_t>();
  info.config.factor = j.at("factor").get<uint64_t>();
  info.config.kill_factor = j.at("kill_factor").get<uint64_t>();
  info.config.kill_new_factor = j.at("kill_new_factor").get<uint64_t>();
  info.config.mutants_per_exec = j.at("mutants_per_exec").get<uint32_t>();
  info.config.extra_time_ratio = j.at("extra_time_ratio").get<double>();
  info.config.fuel_cap = j.at("fuel_cap").get<uint64_t>();
  info.config.rng_seed = j.at("rng_seed").get<uint64_t>();
  info.config.n_min = j.at("n_min").get<uint64_t>();
  info.config.n_max = j.at("n_max").get<uint64_t>();
  info.config.workers = j.at("workers").get<unsigned>();
  if (j.contains("max_execs")) info.config.max_execs = j["max_execs"].get<uint64_t>();
  if (j.contains("duration_ms"))
    info.config.duration_ms = j["duration_ms"].get<uint64_t>();
  std::string crit = j.value("criterion", "bytes");
  if (crit.rfind("float-eps:", 0) == 0)
    info.config.criterion =
        exec::Criterion::float_eps(std::stod(crit.substr(10)));
  return info;
}

std::string event_to_json(const fuzz::Event& e) {
  nlohmann::json j;
  j["time_ms"] = e.time_ms;
  j["exec_index"] = e.exec_index;
  j["kind"] = fuzz::event_kind_name(e.kind);
  if (e.seed_id >= 0) j["seed_id"] = e.seed_id;
  switch (e.kind) {
    case fuzz::EventKind::NewCov: {
      auto edges = nlohmann::json::array();
      for (const auto& [site, outcome] : e.edges)
        edges.push_back({{"site", site}, {"outcome", outcome}});
      j["payload"] = {{"edges", edges}};
      break;
    }
    case fuzz::EventKind::Kill:
    case fuzz::EventKind::KillNew:
      j["payload"] = {{"mutants", e.mutant_ids}};
      break;
    case fuzz::EventKind::Crash:
      j["payload"] = {{"crash", ir::crash_kind_name(*e.crash)}};
      break;
    case fuzz::EventKind::SeedSaved:
      break;
  }
  return j.dump();
}

namespace {

std::string seed_meta_json(const fuzz::SeedEntry& s) {
  nlohmann::json j;
  j["parent"] = s.parent;
  j["marks"] = {{"favored", s.marks.favored},
                {"capable", s.marks.capable},
                {"kills_new", s.marks.kills_new}};
  j["exec_index"] = s.exec_index;
  j["time_ms"] = s.time_ms;
  return j.dump(2) + "\n";
}

std::string failure_meta_json(const fuzz::Failure& f) {
  nlohmann::json j;
  j["crash"] = ir::crash_kind_name(f.kind);
  j["exec_index"] = f.exec_index;
  j["time_ms"] = f.time_ms;
  return j.dump(2) + "\n";
}

}  // namespace

void save_run(const std::string& dir, const fuzz::CampaignResult& result,
              const fuzz::CampaignConfig& config, const std::string& case_name,
              const std::string& pool_digest) {
  fs::path root(dir);
  fs::create_directories(root / "corpus");
  fs::create_directories(root / "failures");

  write_file(root / "config.json", config_to_json(config, case_name, pool_digest));

  for (const auto& s : result.queue.entries) {
    write_bytes(root / "corpus" / id_name(s.id), s.bytes);
    write_file(root / "corpus" / (id_name(s.id) + ".meta.json"), seed_meta_json(s));
  }
  for (const auto& f : result.failures) {
    write_bytes(root / "failures" / id_name(f.id), f.bytes);
    write_file(root / "failures" / (id_name(f.id) + ".meta.json"),
               failure_meta_json(f));
  }

  std::string events;
  for (const auto& e : result.log) events += event_to_json(e) + "\n";
  write_file(root / "events.jsonl", events);
}

LoadedRun load_run(const std::string& dir) {
  fs::path root(dir);
  LoadedRun run;
  run.info = config_from_json(read_file(root / "config.json"));

  for (uint32_t id = 0;; ++id) {
    fs::path seed_path = root / "corpus" / id_name(id);
    if (!fs::exists(seed_path)) break;
    SavedSeed s;
    s.id = id;
    s.bytes = read_bytes(seed_path);
    nlohmann::json meta =
        nlohmann::json::parse(read_file(root / "corpus" / (id_name(id) + ".meta.json")));
    s.parent = meta.at("parent").get<int32_t>();
    s.marks.favored = meta.at("marks").at("favored").get<bool>();
    s.marks.capable = meta.at("marks").at("capable").get<bool>();
    s.marks.kills_new = meta.at("marks").at("kills_new").get<bool>();
    s.exec_index = meta.at("exec_index").get<uint64_t>();
    s.time_ms = meta.at("time_ms").get<uint64_t>();
    run.seeds.push_back(std::move(s));
  }
  return run;
}

}  // namespace mucgf::rundir
