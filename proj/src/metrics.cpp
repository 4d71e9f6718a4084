#include "mapc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mapc {

std::optional<double> percentile(std::span<const double> samples, double p) {
  if (!(p > 0.0 && p < 100.0)) throw std::invalid_argument("percentile: p must lie in (0, 100)");
  if (samples.empty()) return std::nullopt;
  std::vector<double> sorted(samples.begin(), samples.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

std::vector<double> priority_histogram(std::span<const TraceRecord> trace, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("priority_histogram: need at least one bin");
  std::vector<double> hist(bins, 0.0);
  std::size_t txops = 0;
  for (const auto& r : trace) {
    if (r.collided) continue;
    const double scaled = std::ceil(r.priority * static_cast<double>(bins) - 1e-9);
    const auto bin = static_cast<std::size_t>(std::clamp(scaled, 1.0, static_cast<double>(bins))) - 1;
    hist[bin] += 1.0;
    ++txops;
  }
  if (txops > 0) {
    for (double& h : hist) h /= static_cast<double>(txops);
  }
  return hist;
}

EpisodeMetrics compute_metrics(const Simulation& sim, std::size_t priority_bins) {
  EpisodeMetrics m;
  double sum = 0.0;
  for (std::size_t i = 0; i < sim.delays().size(); ++i) {
    const auto& d = sim.delays()[i];
    m.sta_p99.push_back(percentile(d, 99.0));
    for (double x : d) sum += x;
    m.delivered += d.size();
    const auto& q = sim.queues()[i];
    m.dropped += q.drop_count();
    if (d.empty() && q.arrivals_total() > 0) m.starved = true;
    if (m.sta_p99.back()) m.worst_p99 = std::max(m.worst_p99.value_or(0.0), *m.sta_p99.back());
  }
  if (m.starved) m.worst_p99 = std::numeric_limits<double>::infinity();
  m.mean_delay = m.delivered > 0 ? sum / static_cast<double>(m.delivered) : 0.0;
  m.txops = sim.txop_count();
  m.collisions = sim.collision_count();
  m.priority_histogram = priority_histogram(sim.trace(), priority_bins);
  return m;
}

nlohmann::json to_json(const EpisodeMetrics& m) {
  auto finite_or_null = [](const std::optional<double>& v) {
    return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json sta = nlohmann::json::array();
  for (const auto& p : m.sta_p99) sta.push_back(finite_or_null(p));
  return {{"worst_p99", finite_or_null(m.worst_p99)},
          {"starved", m.starved},
          {"mean_delay", m.mean_delay},
          {"sta_p99", std::move(sta)},
          {"delivered", m.delivered},
          {"dropped", m.dropped},
          {"txops", m.txops},
          {"collisions", m.collisions},
          {"priority_histogram", m.priority_histogram}};
}

bool keep_realization(std::span<const double> worst_p99_per_scheduler, double threshold_s) {
  const auto best = std::min_element(worst_p99_per_scheduler.begin(), worst_p99_per_scheduler.end());
  return best != worst_p99_per_scheduler.end() && *best < threshold_s;
}

}  // namespace mapc
