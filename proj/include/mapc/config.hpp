#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapc/rlenv.hpp"

namespace mapc {

/// Constant total offered load spread over a variable STA count.
struct NetworkLoad {
  double mean_mbps = 800.0;
  double sd_mbps = 92.4;
};

/// Orchestration settings of the "experiment" block.
struct ExperimentSettings {
  std::vector<std::string> schedulers{"mnp", "op", "tat"};
  std::size_t episodes = 100;
  std::uint64_t seed = 1;
  // Total STA counts to sweep; STAs are split evenly over the J APs. Empty
  // runs only the base deployment.
  std::vector<std::size_t> sta_sweep;
  std::optional<NetworkLoad> network_load;
  bool apply_discard = true;
  double discard_threshold_s = 0.1;
  std::size_t workers = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct FileConfig {
  EnvConfig env;
  ExperimentSettings experiment;
};

/// Parses a config document. Keys mirror the simulation parameter table:
/// times in the table's units (us / ms / s), P_max in mW, CCA in dBm.
/// Unknown keys are rejected. `base_dir` resolves a relative "mcs_table" path.
FileConfig config_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
FileConfig load_config(const std::string& path);
/// Inverse of config_from_json; the MCS table is inlined as "mcs_rows".
nlohmann::json config_to_json(const FileConfig& cfg);

}  // namespace mapc
