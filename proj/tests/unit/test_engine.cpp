#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "mapc/engine.hpp"
#include "mapc/metrics.hpp"
#include "mapc/rlenv.hpp"

using namespace mapc;

namespace {

SimConfig small_config(double load_mbps) {
  SimConfig cfg;
  cfg.deployment.ap_count = 1;
  cfg.deployment.stas_per_ap = 1;
  cfg.traffic.load_min_mbps = cfg.traffic.load_max_mbps = load_mbps;
  cfg.traffic.bursty_probability = 0.0;
  cfg.link.phy.per = 0.0;
  return cfg;
}

std::unique_ptr<Simulation> run(const SimConfig& cfg, std::uint64_t seed, const std::string& sched) {
  auto sim = make_episode(cfg, make_scenario(cfg, seed), seed);
  advance_episode(*sim, make_heuristic(sched));
  return sim;
}

}  // namespace

TEST_CASE("isolated frame delay is backoff plus overhead plus data window") {
  const SimConfig cfg = small_config(0.012);  // one frame per second
  const auto sim = run(cfg, 4, "op");
  const MacParams mac;
  std::size_t checked = 0;
  for (const auto& rec : sim->trace()) {
    REQUIRE_FALSE(rec.collided);  // a single AP never collides
    const double fixed = txop_overhead(mac) + mac.txop_max_s;
    CHECK(rec.airtime_s >= fixed - 1e-12);
    CHECK(rec.airtime_s <= fixed + mac.cw_min * mac.slot_s + 1e-12);
    CHECK(rec.end_s - rec.time_s == doctest::Approx(fixed));
  }
  const auto& delays = sim->delays()[0];
  REQUIRE(delays.size() == sim->trace().size());
  for (std::size_t k = 0; k < delays.size(); ++k) {
    if (sim->trace()[k].members[0].sent != 1) continue;
    CHECK(delays[k] == doctest::Approx(sim->trace()[k].airtime_s).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked >= 2);
}

TEST_CASE("empty system fast-forwards and finishes") {
  const SimConfig cfg = small_config(0.012);
  auto sim = make_episode(cfg, make_scenario(cfg, 9), 9);
  REQUIRE(sim->advance_to_decision());
  CHECK(sim->now() > 0.0);
  CHECK(sim->idle_time() > 0.0);
  CHECK(std::any_of(sim->mask().begin(), sim->mask().end(), [](auto m) { return m != 0; }));
  advance_episode(*sim, make_heuristic("mnp"));
  CHECK(sim->finished());
  CHECK_FALSE(sim->advance_to_decision());
  CHECK(sim->now() >= cfg.sim_duration_s);
}

TEST_CASE("engine is deterministic and conserves frames") {
  SimConfig cfg;
  cfg.sim_duration_s = 1.0;
  for (const char* name : {"mnp", "op", "tat"}) {
    const auto a = run(cfg, 77, name);
    const auto b = run(cfg, 77, name);
    CHECK(a->trace() == b->trace());
    CHECK(a->delays() == b->delays());
    for (std::size_t i = 0; i < a->queues().size(); ++i) {
      const auto& q = a->queues()[i];
      CHECK(q.arrivals_total() == q.delivered_total() + q.drop_count() + q.size());
      CHECK(a->delays()[i].size() == q.delivered_total());
    }
  }
}

TEST_CASE("trace timeline is ordered and accounts for elapsed time") {
  SimConfig cfg;
  cfg.sim_duration_s = 1.0;
  const auto sim = run(cfg, 5, "mnp");
  const auto& trace = sim->trace();
  REQUIRE(trace.size() > 10);
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    CHECK(trace[k].end_s <= trace[k + 1].time_s + 1e-12);
    CHECK(trace[k].seq == k);
  }
  CHECK(sim->idle_time() + sim->busy_time() == doctest::Approx(sim->now()));
  CHECK(sim->collision_count() + sim->txop_count() == trace.size());
  for (const auto& d : sim->delays()) {
    for (double x : d) {
      CHECK(x > 0.0);
      CHECK(x <= cfg.sim_duration_s + collision_penalty(cfg.mac) + txop_overhead(cfg.mac) + cfg.mac.txop_max_s +
                     cfg.mac.cw_max * cfg.mac.slot_s);
    }
  }
}

TEST_CASE("masked or invalid execute leaves state unchanged") {
  SimConfig cfg;
  cfg.sim_duration_s = 0.5;
  auto sim = make_episode(cfg, make_scenario(cfg, 3), 3);
  CHECK_THROWS_AS(sim->execute(0), std::invalid_argument);  // not at a decision yet
  REQUIRE(sim->advance_to_decision());
  const double t = sim->now();
  const auto before = sim->trace().size();
  CHECK_THROWS_AS(sim->execute(static_cast<ActionId>(sim->mask().size())), std::invalid_argument);
  for (ActionId z = 0; z < sim->mask().size(); ++z) {
    if (!sim->mask()[z]) {
      CHECK_THROWS_AS(sim->execute(z), std::invalid_argument);
      break;
    }
  }
  CHECK(sim->now() == t);
  CHECK(sim->trace().size() == before);
  CHECK(sim->at_decision());
}

TEST_CASE("trace JSON has the documented keys") {
  SimConfig cfg;
  cfg.sim_duration_s = 0.2;
  const auto sim = run(cfg, 8, "op");
  REQUIRE_FALSE(sim->trace().empty());
  for (const auto& rec : sim->trace()) {
    const auto j = to_json(rec);
    for (const char* key : {"seq", "time", "end", "airtime", "collided"}) CHECK(j.contains(key));
    if (!rec.collided) {
      CHECK(j["action"] == *rec.action);
      CHECK(j["members"].size() == rec.members.size());
    }
  }
}

TEST_CASE("scenario construction is seeded") {
  SimConfig cfg;
  const auto a = make_scenario(cfg, 10);
  const auto b = make_scenario(cfg, 10);
  CHECK(a->deployment == b->deployment);
  CHECK(a->channel == b->channel);
  CHECK(a->catalog.size() == b->catalog.size());
  cfg.fixed_deployment = true;
  cfg.deployment.rng_seed = 42;
  const auto c = make_scenario(cfg, 1);
  const auto d = make_scenario(cfg, 2);
  CHECK(c->deployment == d->deployment);
  CHECK(c->channel == d->channel);
}

TEST_CASE("traffic draws respect the configured range and mix") {
  TrafficSettings s;
  const auto profiles = draw_traffic(s, 2000, 12000, 6);
  std::size_t bursty = 0;
  for (const auto& p : profiles) {
    CHECK(p.load_mbps >= s.load_min_mbps);
    CHECK(p.load_mbps <= s.load_max_mbps);
    bursty += p.model == TrafficModel::Bursty ? 1 : 0;
  }
  CHECK(static_cast<double>(bursty) / 2000.0 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("constant network load range") {
  const auto [lo, hi] = load_range_for_network(16, 800.0, 92.4);
  CHECK(lo == doctest::Approx(10.0).epsilon(1e-3));
  CHECK(hi == doctest::Approx(90.0).epsilon(1e-3));
  const auto [lo8, hi8] = load_range_for_network(8, 800.0, 92.4);
  CHECK((lo8 + hi8) / 2.0 * 8.0 == doctest::Approx(800.0));
}
