#include "mapc/rlenv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mapc/errors.hpp"
#include "mapc/metrics.hpp"
#include "mapc/rng.hpp"

namespace mapc {

void EnvConfig::validate() const {
  sim.validate();
  if (!(beta > 0.0 && nu > 0.0)) throw ConfigError("beta and nu must be positive");
  if (!(h_max > 0.0)) throw ConfigError("h_max must be positive");
  if (priority_bins < 1) throw ConfigError("priority_bins must be >= 1");
}

namespace {

std::optional<std::size_t> oldest_sta(std::span<const std::optional<double>> hol) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < hol.size(); ++i) {
    if (hol[i] && (!best || *hol[i] < *hol[*best])) best = i;
  }
  return best;
}

std::optional<double> min_hol(std::span<const std::optional<double>> hol) {
  const auto i = oldest_sta(hol);
  return i ? hol[*i] : std::nullopt;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double reward_shaping(std::span<const std::optional<double>> hol_before,
                      std::span<const std::optional<double>> hol_after, double now) {
  const auto oldest = oldest_sta(hol_before);
  if (!oldest) return 0.0;
  if (hol_after[*oldest] && *hol_after[*oldest] == *hol_before[*oldest]) return 0.0;
  const double after = min_hol(hol_after).value_or(now);
  return after - *hol_before[*oldest];
}

double reward_longterm(double now, std::span<const std::optional<double>> hol, double beta, double nu) {
  const double delay = now - min_hol(hol).value_or(now);
  return std::min(beta / (delay + nu), 1.0);
}

std::vector<double> make_observation(const Simulation& sim, const EnvConfig& cfg) {
  const auto& queues = sim.queues();
  const auto& dep = sim.scenario().deployment;
  const std::size_t n = queues.size();
  std::vector<double> obs(3 * n, 0.0);
  const auto capacity = static_cast<double>(cfg.sim.queue_capacity);
  for (std::size_t i = 0; i < n; ++i) {
    if (auto e = queues[i].head()) obs[i] = clamp01((sim.now() - *e) / cfg.sim.sim_duration_s);
    obs[n + i] = clamp01(static_cast<double>(queues[i].size()) / capacity);
    const double h = sim.scenario().channel.gain(dep.sta_node(i), dep.ap_node(dep.serving_ap(i)));
    obs[2 * n + i] = clamp01(h / cfg.h_max);
  }
  return obs;
}

std::unique_ptr<Simulation> make_episode(const SimConfig& cfg, std::shared_ptr<const Scenario> scenario,
                                         std::uint64_t seed) {
  return std::make_unique<Simulation>(std::move(scenario), cfg, derive_seed(seed, stream::kEngine));
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

EnvReset Environment::reset(std::uint64_t seed) {
  std::shared_ptr<const Scenario> scenario;
  try {
    scenario = make_scenario(cfg_.sim, seed);
  } catch (const ScenarioError& e) {
    throw ProtocolError("scenario_error", e.what());
  }
  scenario_ = std::move(scenario);
  sim_ = make_episode(cfg_.sim, scenario_, seed);
  sim_->advance_to_decision();

  EnvReset out;
  out.observation = make_observation(*sim_, cfg_);
  out.mask = sim_->at_decision() ? sim_->mask() : ActionMask(scenario_->catalog.size(), 0);
  out.sta_count = scenario_->deployment.sta_count();
  out.action_count = scenario_->catalog.size();
  return out;
}

EnvStep Environment::step(ActionId action) {
  if (!sim_) throw ProtocolError("not_reset", "step before reset");
  if (!sim_->at_decision()) throw ProtocolError("episode_over", "episode already terminated; call reset");
  if (action >= sim_->mask().size()) {
    throw ProtocolError("invalid_action", "action " + std::to_string(action) + " out of range [0, " +
                                              std::to_string(sim_->mask().size()) + ")");
  }
  if (!sim_->mask()[action]) {
    throw ProtocolError("masked_action", "action " + std::to_string(action) + " is masked");
  }

  const auto before = sim_->hol();
  sim_->execute(action);
  const auto after = sim_->hol();
  const double t = sim_->now();

  RewardFields parts;
  parts.shaping = reward_shaping(before, after, t);
  parts.longterm = reward_longterm(t, after, cfg_.beta, cfg_.nu);
  parts.total = parts.shaping + parts.longterm;
  sim_->last_record().reward = parts;
  nlohmann::json info = to_json(sim_->last_record());

  sim_->advance_to_decision();

  EnvStep out;
  out.observation = make_observation(*sim_, cfg_);
  out.mask = sim_->at_decision() ? sim_->mask() : ActionMask(scenario_->catalog.size(), 0);
  out.reward = parts.total;
  out.parts = parts;
  out.terminated = sim_->finished();
  if (out.terminated) {
    const EpisodeMetrics m = compute_metrics(*sim_, cfg_.priority_bins);
    info["episode"] = to_json(m);
  }
  out.info = std::move(info);
  return out;
}

}  // namespace mapc
