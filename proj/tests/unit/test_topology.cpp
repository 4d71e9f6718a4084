#include <cmath>

#include "doctest.h"
#include "mapc/errors.hpp"
#include "mapc/topology.hpp"

using namespace mapc;

TEST_CASE("row layout puts APs at room centers one spacing apart") {
  DeploymentConfig cfg;
  const auto rooms = cfg.rooms();
  REQUIRE(rooms.size() == 4);
  for (std::size_t j = 0; j + 1 < rooms.size(); ++j) {
    CHECK(distance(rooms[j].center(), rooms[j + 1].center()) == doctest::Approx(30.0));
  }
}

TEST_CASE("wall counting along a row of rooms") {
  const auto rooms = row_layout(4, 30.0);
  const Point a{15, 15}, b{45, 15}, c{105, 15};
  CHECK(count_walls(rooms, a, a) == 0);
  CHECK(count_walls(rooms, a, Point{20, 25}) == 0);
  CHECK(count_walls(rooms, a, b) == 1);
  CHECK(count_walls(rooms, a, c) == 3);
  CHECK(count_walls(rooms, c, a) == 3);
  // Diagonal segment still crosses one interior wall.
  CHECK(count_walls(rooms, Point{25, 2}, Point{35, 28}) == 1);
}

TEST_CASE("generated STAs stay in their annulus and room") {
  DeploymentConfig cfg;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Deployment dep = generate_deployment(cfg, seed);
    REQUIRE(dep.sta_count() == 16);
    for (std::size_t i = 0; i < dep.sta_count(); ++i) {
      const std::size_t ap = dep.serving_ap(i);
      CHECK(ap == i / 4);
      const double d = distance(dep.sta_position(i), dep.ap_position(ap));
      CHECK(d >= 1.0 - 1e-12);
      CHECK(d <= 10.0 + 1e-12);
      CHECK(dep.rooms()[ap].contains(dep.sta_position(i)));
      CHECK(dep.walls_between(dep.sta_node(i), dep.ap_node(ap)) == 0);
    }
  }
}

TEST_CASE("deployment generation is deterministic per seed") {
  DeploymentConfig cfg;
  CHECK(generate_deployment(cfg, 7) == generate_deployment(cfg, 7));
  CHECK_FALSE(generate_deployment(cfg, 7) == generate_deployment(cfg, 8));
}

TEST_CASE("walls matrix is symmetric and matches geometry") {
  const Deployment dep = generate_deployment(DeploymentConfig{}, 3);
  for (std::size_t a = 0; a < dep.node_count(); ++a) {
    for (std::size_t b = 0; b < dep.node_count(); ++b) {
      CHECK(dep.walls_between(a, b) == dep.walls_between(b, a));
      CHECK(dep.walls_between(a, b) ==
            count_walls(dep.rooms(), dep.node_position(a), dep.node_position(b)));
    }
  }
  CHECK(dep.walls_between(dep.ap_node(0), dep.ap_node(3)) == 3);
}

TEST_CASE("config validation") {
  DeploymentConfig cfg;
  cfg.sta_distance_max = 16.0;  // does not fit inside a 30 m room around its center
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DeploymentConfig{};
  cfg.sta_distance_min = 0.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DeploymentConfig{};
  cfg.room_layout = row_layout(3, 30.0);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DeploymentConfig{};
  cfg.ap_count = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("deployment JSON round trip") {
  const Deployment dep = generate_deployment(DeploymentConfig{}, 11);
  const Deployment back = deployment_from_json(nlohmann::json::parse(to_json(dep).dump()));
  CHECK(back == dep);
}
