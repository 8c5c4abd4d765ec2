#pragma once

#include <string>
#include <vector>

#include "mucgf/fuzz.hpp"

namespace mucgf::rundir {

// On-disk layout of a campaign run:
//   corpus/id_NNNNNN            raw seed bytes
//   corpus/id_NNNNNN.meta.json  {parent, marks, exec_index, time_ms}
//   failures/id_NNNNNN(.meta.json)  same scheme plus crash kind
//   events.jsonl                one event per line
//   config.json                 campaign config snapshot

std::string config_to_json(const fuzz::CampaignConfig& config,
                           const std::string& case_name,
                           const std::string& pool_digest);

struct RunConfigInfo {
  fuzz::CampaignConfig config;
  std::string case_name;
  std::string pool_digest;
};

RunConfigInfo config_from_json(const std::string& json_text);

std::string event_to_json(const fuzz::Event& e);

void save_run(const std::string& dir, const fuzz::CampaignResult& result,
              const fuzz::CampaignConfig& config, const std::string& case_name,
              const std::string& pool_digest);

struct SavedSeed {
  uint32_t id = 0;
  std::vector<uint8_t> bytes;
  fuzz::SeedMarks marks;
  int32_t parent = -1;
  uint64_t exec_index = 0;
  uint64_t time_ms = 0;
};

struct LoadedRun {
  RunConfigInfo info;
  std::vector<SavedSeed> seeds;  // discovery (id) order
};

LoadedRun load_run(const std::string& dir);

}  // namespace mucgf::rundir
