#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapc/config.hpp"
#include "mapc/metrics.hpp"

namespace mapc {

struct ExperimentConfig {
  EnvConfig env;
  ExperimentSettings settings;
  std::string out_dir;

  void validate() const;
};

/// Outcome of every scheduler on one (N, episode) realization.
struct EpisodeResult {
  std::size_t sta_count = 0;
  std::size_t episode = 0;
  std::uint64_t seed = 0;
  std::uint64_t deployment_seed = 0;
  std::optional<std::string> error;  // scenario failure; excluded from summaries
  bool kept = true;
  std::map<std::string, EpisodeMetrics> metrics;  // by scheduler name
};

nlohmann::json to_json(const EpisodeResult& r);
EpisodeResult episode_result_from_json(const nlohmann::json& j);

/// Episode seed shared by every scheduler and every sweep point.
std::uint64_t episode_seed(std::uint64_t base, std::size_t episode);

/// Simulation config for a sweep point (STA count N split over the APs, and
/// per-STA load range when a constant network load is configured).
SimConfig sweep_point_config(const ExperimentConfig& cfg, std::size_t sta_count);

/// Runs one realization under every configured scheduler.
EpisodeResult run_episode(const ExperimentConfig& cfg, std::size_t sta_count, std::size_t episode);

/// Runs the whole sweep on a worker pool. Results are ordered by (N, episode)
/// regardless of completion order. Writes results files when out_dir is set.
std::vector<EpisodeResult> run_experiment(const ExperimentConfig& cfg);

struct SchedulerSummary {
  std::size_t sta_count = 0;
  std::string scheduler;
  std::size_t episodes = 0;   // successful realizations
  std::size_t kept = 0;
  std::size_t failed = 0;
  double discard_fraction = 0.0;
  // Over kept realizations, seconds; nullopt when nothing was kept.
  std::optional<double> worst_p99_median;
  std::optional<double> worst_p99_mean;
  std::optional<double> worst_p99_p10;
  std::optional<double> worst_p99_p90;
  std::optional<double> mean_delay;
  std::vector<double> priority_histogram;
};

std::vector<SchedulerSummary> summarize(const std::vector<EpisodeResult>& results);
nlohmann::json to_json(const SchedulerSummary& s);

/// results.jsonl, summary.json, summary.csv and worst_p99.csv in `dir`.
void write_results(const std::string& dir, const std::vector<EpisodeResult>& results);
std::vector<EpisodeResult> read_results(const std::string& dir);

/// Human-readable summary table.
std::string format_summary(const std::vector<SchedulerSummary>& rows);

}  // namespace mapc
