#include "mapc/scenario.hpp"

#include <cmath>
#include <random>

#include "mapc/errors.hpp"
#include "mapc/rng.hpp"

namespace mapc {

void TrafficSettings::validate() const {
  if (!(load_min_mbps > 0.0 && load_min_mbps <= load_max_mbps)) {
    throw ConfigError("traffic load range must satisfy 0 < omega_min <= omega_max");
  }
  if (!(bursty_probability >= 0.0 && bursty_probability <= 1.0)) {
    throw ConfigError("bursty probability must lie in [0, 1]");
  }
  if (!(on_mean_s > 0.0 && off_mean_s > 0.0)) throw ConfigError("T_ON and T_OFF must be positive");
}

std::pair<double, double> load_range_for_network(std::size_t sta_count, double mean_mbps, double sd_mbps) {
  if (sta_count == 0 || !(mean_mbps > 0.0) || !(sd_mbps >= 0.0)) {
    throw ConfigError("network load needs STAs, a positive mean and a non-negative sd");
  }
  const double n = static_cast<double>(sta_count);
  const double centre = mean_mbps / n;
  // Var(sum) = n (b - a)^2 / 12.
  const double width = sd_mbps * std::sqrt(12.0 / n);
  const double lo = centre - width / 2.0;
  if (!(lo > 0.0)) throw ConfigError("network load sd too large for a positive per-STA range");
  return {lo, centre + width / 2.0};
}

void SimConfig::validate() const {
  deployment.validate();
  link.channel.validate();
  link.phy.validate();
  mac.validate();
  traffic.validate();
  if (!(sim_duration_s > 0.0)) throw ConfigError("T_sim must be positive");
  if (queue_capacity == 0) throw ConfigError("rho_max must be positive");
}

std::vector<TrafficProfile> draw_traffic(const TrafficSettings& settings, std::size_t sta_count,
                                         int frame_bits, std::uint64_t seed) {
  Rng rng = make_rng(seed, stream::kTrafficProfile);
  std::bernoulli_distribution bursty(settings.bursty_probability);
  std::uniform_real_distribution<double> load(settings.load_min_mbps, settings.load_max_mbps);
  std::vector<TrafficProfile> out;
  out.reserve(sta_count);
  for (std::size_t i = 0; i < sta_count; ++i) {
    TrafficProfile p;
    p.model = bursty(rng) ? TrafficModel::Bursty : TrafficModel::Poisson;
    p.load_mbps = settings.load_min_mbps == settings.load_max_mbps ? settings.load_min_mbps : load(rng);
    p.on_mean_s = settings.on_mean_s;
    p.off_mean_s = settings.off_mean_s;
    p.frame_bits = frame_bits;
    out.push_back(p);
  }
  return out;
}

std::shared_ptr<const Scenario> make_scenario(const SimConfig& cfg, std::uint64_t episode_seed) {
  cfg.validate();
  auto scenario = std::make_shared<Scenario>();
  scenario->deployment_seed =
      cfg.fixed_deployment ? cfg.deployment.rng_seed : derive_seed(episode_seed, stream::kDeployment);
  scenario->deployment = generate_deployment(cfg.deployment, scenario->deployment_seed);
  scenario->channel = realize_channel(scenario->deployment, cfg.link.channel, scenario->deployment_seed);
  scenario->catalog = build_catalog(scenario->deployment, scenario->channel, cfg.link);
  scenario->traffic = draw_traffic(cfg.traffic, scenario->deployment.sta_count(),
                                   cfg.link.phy.frame_bits, episode_seed);
  return scenario;
}

}  // namespace mapc
