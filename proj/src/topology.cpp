#include "mapc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mapc/errors.hpp"
#include "mapc/rng.hpp"

namespace mapc {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Room::contains(Point p) const {
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
}

double Room::clearance(Point p) const {
  return std::min({p.x - lo.x, hi.x - p.x, p.y - lo.y, hi.y - p.y});
}

std::vector<Room> row_layout(std::size_t ap_count, double inter_ap_distance) {
  std::vector<Room> rooms;
  rooms.reserve(ap_count);
  for (std::size_t j = 0; j < ap_count; ++j) {
    const double x0 = static_cast<double>(j) * inter_ap_distance;
    rooms.push_back({{x0, 0.0}, {x0 + inter_ap_distance, inter_ap_distance}});
  }
  return rooms;
}

std::vector<Room> DeploymentConfig::rooms() const {
  return room_layout.empty() ? row_layout(ap_count, inter_ap_distance) : room_layout;
}

void DeploymentConfig::validate() const {
  if (ap_count < 1) throw ConfigError("ap_count must be >= 1");
  if (stas_per_ap < 1) throw ConfigError("stas_per_ap must be >= 1");
  if (!(inter_ap_distance > 0.0)) throw ConfigError("inter_ap_distance must be positive");
  if (!(sta_distance_min >= 1.0)) throw ConfigError("sta_distance_min must be >= 1 m");
  if (!(sta_distance_max >= sta_distance_min)) {
    throw ConfigError("sta_distance_max must be >= sta_distance_min");
  }
  const auto layout = rooms();
  if (layout.size() != ap_count) {
    throw ConfigError("room_layout must hold exactly one room per AP");
  }
  for (std::size_t j = 0; j < layout.size(); ++j) {
    const Room& room = layout[j];
    if (!(room.hi.x > room.lo.x && room.hi.y > room.lo.y)) {
      throw ConfigError("room " + std::to_string(j) + " is degenerate");
    }
    const Point ap = room.center();
    int owners = 0;
    for (const Room& other : layout) owners += other.contains(ap) ? 1 : 0;
    if (owners != 1) {
      throw ConfigError("AP " + std::to_string(j) + " must lie inside exactly one room");
    }
    if (room.clearance(ap) < sta_distance_max) {
      throw ConfigError("room " + std::to_string(j) + " cannot contain the STA annulus of radius " +
                        std::to_string(sta_distance_max) + " m");
    }
  }
}

namespace {

int room_of(std::span<const Room> rooms, Point p) {
  for (std::size_t r = 0; r < rooms.size(); ++r) {
    if (rooms[r].contains(p)) return static_cast<int>(r);
  }
  return -1;
}

// Parameters t in (0, 1) where a + t (b - a) meets the line x = c (or y = c)
// inside the edge's span.
void edge_hits(double a0, double b0, double a1, double b1, double c, double lo, double hi,
               std::vector<double>& out) {
  const double d0 = b0 - a0;
  if (d0 == 0.0) return;
  const double t = (c - a0) / d0;
  if (t <= 0.0 || t >= 1.0) return;
  const double other = a1 + t * (b1 - a1);
  if (other >= lo && other <= hi) out.push_back(t);
}

}  // namespace

int count_walls(std::span<const Room> rooms, Point a, Point b) {
  std::vector<double> cuts{0.0, 1.0};
  for (const Room& r : rooms) {
    edge_hits(a.x, b.x, a.y, b.y, r.lo.x, r.lo.y, r.hi.y, cuts);
    edge_hits(a.x, b.x, a.y, b.y, r.hi.x, r.lo.y, r.hi.y, cuts);
    edge_hits(a.y, b.y, a.x, b.x, r.lo.y, r.lo.x, r.hi.x, cuts);
    edge_hits(a.y, b.y, a.x, b.x, r.hi.y, r.lo.x, r.hi.x, cuts);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double u, double v) { return std::abs(u - v) < 1e-12; }),
             cuts.end());

  // Classify each sub-segment by the room holding its midpoint; every change
  // of room (or leaving/entering the layout) crosses one wall.
  int walls = 0;
  int previous = -2;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double t = 0.5 * (cuts[k] + cuts[k + 1]);
    const int room = room_of(rooms, {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    if (previous != -2 && room != previous) ++walls;
    previous = room;
  }
  return walls;
}

Deployment::Deployment(std::vector<Room> rooms, std::vector<Point> ap_positions,
                       std::vector<Point> sta_positions, std::vector<std::size_t> sta_to_ap)
    : rooms_(std::move(rooms)),
      aps_(std::move(ap_positions)),
      stas_(std::move(sta_positions)),
      sta_to_ap_(std::move(sta_to_ap)) {
  if (sta_to_ap_.size() != stas_.size()) {
    throw ConfigError("sta_to_ap must map every STA");
  }
  stas_by_ap_.assign(aps_.size(), {});
  for (std::size_t i = 0; i < sta_to_ap_.size(); ++i) {
    if (sta_to_ap_[i] >= aps_.size()) throw ConfigError("STA mapped to an unknown AP");
    stas_by_ap_[sta_to_ap_[i]].push_back(i);
  }
  const std::size_t n = node_count();
  walls_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const int w = count_walls(rooms_, node_position(a), node_position(b));
      walls_[a * n + b] = w;
      walls_[b * n + a] = w;
    }
  }
}

Point Deployment::node_position(std::size_t node) const {
  return node < aps_.size() ? aps_.at(node) : stas_.at(node - aps_.size());
}

int Deployment::walls_between(std::size_t node_a, std::size_t node_b) const {
  const std::size_t n = node_count();
  if (node_a >= n || node_b >= n) throw std::out_of_range("walls_between: node index");
  return walls_[node_a * n + node_b];
}

bool Deployment::operator==(const Deployment& other) const {
  return rooms_ == other.rooms_ && aps_ == other.aps_ && stas_ == other.stas_ &&
         sta_to_ap_ == other.sta_to_ap_ && walls_ == other.walls_;
}

Deployment generate_deployment(const DeploymentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto rooms = cfg.rooms();
  Rng rng = make_rng(seed, stream::kDeployment);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> radius(cfg.sta_distance_min, cfg.sta_distance_max);

  std::vector<Point> aps;
  std::vector<Point> stas;
  std::vector<std::size_t> mapping;
  for (std::size_t j = 0; j < cfg.ap_count; ++j) {
    const Point ap = rooms[j].center();
    aps.push_back(ap);
    for (std::size_t n = 0; n < cfg.stas_per_ap; ++n) {
      const double theta = angle(rng);
      const double r = std::max(radius(rng), 1.0);
      stas.push_back({ap.x + r * std::cos(theta), ap.y + r * std::sin(theta)});
      mapping.push_back(j);
    }
  }
  return {rooms, std::move(aps), std::move(stas), std::move(mapping)};
}

namespace {
nlohmann::json point_json(Point p) { return nlohmann::json::array({p.x, p.y}); }
Point point_from(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
}  // namespace

nlohmann::json to_json(const Deployment& dep) {
  nlohmann::json j;
  auto& rooms = j["rooms"] = nlohmann::json::array();
  for (const Room& r : dep.rooms()) rooms.push_back({{"lo", point_json(r.lo)}, {"hi", point_json(r.hi)}});
  auto& aps = j["ap_positions"] = nlohmann::json::array();
  for (Point p : dep.ap_positions()) aps.push_back(point_json(p));
  auto& stas = j["sta_positions"] = nlohmann::json::array();
  for (Point p : dep.sta_positions()) stas.push_back(point_json(p));
  j["sta_to_ap"] = dep.sta_to_ap();
  return j;
}

Deployment deployment_from_json(const nlohmann::json& j) {
  std::vector<Room> rooms;
  for (const auto& r : j.at("rooms")) rooms.push_back({point_from(r.at("lo")), point_from(r.at("hi"))});
  std::vector<Point> aps;
  for (const auto& p : j.at("ap_positions")) aps.push_back(point_from(p));
  std::vector<Point> stas;
  for (const auto& p : j.at("sta_positions")) stas.push_back(point_from(p));
  return {std::move(rooms), std::move(aps), std::move(stas),
          j.at("sta_to_ap").get<std::vector<std::size_t>>()};
}

}  // namespace mapc
