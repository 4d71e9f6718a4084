#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "mapc/engine.hpp"

namespace mapc {

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample.
/// nullopt for an empty sample set. Throws std::invalid_argument unless 0 < p < 100.
std::optional<double> percentile(std::span<const double> samples, double p);

struct EpisodeMetrics {
  std::vector<std::optional<double>> sta_p99;  // seconds; nullopt if nothing delivered
  // Max of sta_p99. nullopt only if no STA delivered anything; +inf when a
  // STA received traffic but never had a frame delivered (starved).
  std::optional<double> worst_p99;
  double mean_delay = 0.0;  // over all delivered frames
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t txops = 0;
  std::size_t collisions = 0;
  std::vector<double> priority_histogram;
  bool starved = false;
};

/// Fraction of TXOPs per priority bin; bin b holds ranks in (b/bins, (b+1)/bins].
/// Collision records are skipped. Throws std::invalid_argument for bins < 1.
std::vector<double> priority_histogram(std::span<const TraceRecord> trace, std::size_t bins);

EpisodeMetrics compute_metrics(const Simulation& sim, std::size_t priority_bins = 5);

nlohmann::json to_json(const EpisodeMetrics& m);

/// Kept iff the best scheduler's worst p99 is strictly below `threshold_s`.
bool keep_realization(std::span<const double> worst_p99_per_scheduler, double threshold_s = 0.1);

}  // namespace mapc
