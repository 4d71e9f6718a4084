#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "mapc/channel.hpp"
#include "mapc/mac.hpp"
#include "mapc/srgroups.hpp"
#include "mapc/topology.hpp"
#include "mapc/traffic.hpp"

namespace mapc {

/// How per-STA traffic is drawn for each episode.
struct TrafficSettings {
  double load_min_mbps = 10.0;
  double load_max_mbps = 90.0;
  double bursty_probability = 0.5;
  double on_mean_s = 1e-3;
  double off_mean_s = 10e-3;

  void validate() const;
};

/// Uniform per-STA load range whose sum over `sta_count` STAs has the given
/// mean and standard deviation.
std::pair<double, double> load_range_for_network(std::size_t sta_count, double mean_mbps, double sd_mbps);

struct SimConfig {
  DeploymentConfig deployment;
  LinkModel link;
  MacParams mac;
  TrafficSettings traffic;
  double sim_duration_s = 5.0;
  std::size_t queue_capacity = 10000;
  // When set every episode reuses deployment.rng_seed for placement and
  // shadowing; only traffic varies.
  bool fixed_deployment = false;

  void validate() const;
};

/// Static world of one episode, shared read-only by every simulation of it.
struct Scenario {
  std::uint64_t deployment_seed = 0;
  Deployment deployment;
  ChannelRealization channel;
  GroupCatalog catalog;
  std::vector<TrafficProfile> traffic;
};

std::vector<TrafficProfile> draw_traffic(const TrafficSettings& settings, std::size_t sta_count,
                                         int frame_bits, std::uint64_t seed);

/// Builds deployment, channel, catalog and traffic profiles for `episode_seed`.
/// Throws ScenarioError if a STA has no usable link.
std::shared_ptr<const Scenario> make_scenario(const SimConfig& cfg, std::uint64_t episode_seed);

}  // namespace mapc
