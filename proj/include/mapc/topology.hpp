#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

namespace mapc {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

/// Axis-aligned office room. Walls are the rectangle edges.
struct Room {
  Point lo;
  Point hi;

  bool contains(Point p) const;
  Point center() const { return {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0}; }
  /// Distance from p to the nearest wall (negative if outside).
  double clearance(Point p) const;
  bool operator==(const Room&) const = default;
};

/// 1 x J row of square rooms, each `inter_ap_distance` wide, so room centers
/// (the AP spots) sit on a line `inter_ap_distance` apart.
std::vector<Room> row_layout(std::size_t ap_count, double inter_ap_distance);

struct DeploymentConfig {
  std::size_t ap_count = 4;
  std::size_t stas_per_ap = 4;
  double inter_ap_distance = 30.0;
  double sta_distance_min = 1.0;
  double sta_distance_max = 10.0;
  // One room per AP; the AP sits at the room center. Empty selects row_layout().
  std::vector<Room> room_layout;
  std::uint64_t rng_seed = 0;

  std::vector<Room> rooms() const;
  /// Throws ConfigError on a violated invariant, including rooms too small
  /// to hold the STA annulus around their AP.
  void validate() const;
};

/// Number of room boundaries crossed by the segment a->b.
int count_walls(std::span<const Room> rooms, Point a, Point b);

/// Static world of one episode. Node indices: APs occupy [0, J), STA i is
/// node J + i. STAs are grouped by serving AP (STA i belongs to AP i / N_j).
class Deployment {
 public:
  Deployment() = default;
  Deployment(std::vector<Room> rooms, std::vector<Point> ap_positions,
             std::vector<Point> sta_positions, std::vector<std::size_t> sta_to_ap);

  std::size_t ap_count() const { return aps_.size(); }
  std::size_t sta_count() const { return stas_.size(); }
  std::size_t node_count() const { return aps_.size() + stas_.size(); }

  std::size_t ap_node(std::size_t ap) const { return ap; }
  std::size_t sta_node(std::size_t sta) const { return aps_.size() + sta; }

  Point node_position(std::size_t node) const;
  Point ap_position(std::size_t ap) const { return aps_.at(ap); }
  Point sta_position(std::size_t sta) const { return stas_.at(sta); }
  std::size_t serving_ap(std::size_t sta) const { return sta_to_ap_.at(sta); }
  const std::vector<std::size_t>& stas_of(std::size_t ap) const { return stas_by_ap_.at(ap); }

  const std::vector<Room>& rooms() const { return rooms_; }
  const std::vector<Point>& ap_positions() const { return aps_; }
  const std::vector<Point>& sta_positions() const { return stas_; }
  const std::vector<std::size_t>& sta_to_ap() const { return sta_to_ap_; }

  int walls_between(std::size_t node_a, std::size_t node_b) const;

  bool operator==(const Deployment& other) const;

 private:
  std::vector<Room> rooms_;
  std::vector<Point> aps_;
  std::vector<Point> stas_;
  std::vector<std::size_t> sta_to_ap_;
  std::vector<std::vector<std::size_t>> stas_by_ap_;
  std::vector<int> walls_;  // node_count x node_count, row-major
};

/// Deterministic for a fixed (cfg, seed). STAs are placed at a uniform angle
/// and a uniform radius in [d_min, d_max] around their AP.
Deployment generate_deployment(const DeploymentConfig& cfg, std::uint64_t seed);

nlohmann::json to_json(const Deployment& dep);
Deployment deployment_from_json(const nlohmann::json& j);

}  // namespace mapc
