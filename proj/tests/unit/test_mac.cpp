#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mapc/errors.hpp"
#include "mapc/mac.hpp"

using namespace mapc;

TEST_CASE("timing constants from the default parameters") {
  const MacParams p;
  CHECK(collision_penalty(p) * 1e6 == doctest::Approx(221.4).epsilon(1e-9));
  CHECK(txop_overhead(p) * 1e6 == doctest::Approx(434.8).epsilon(1e-9));
  MacParams bare = p;
  bare.icf_s = bare.icr_s = bare.tf_s = bare.back_s = 0.0;
  // Only four SIFS and one DIFS remain.
  CHECK(txop_overhead(bare) * 1e6 == doctest::Approx(98.0));
}

TEST_CASE("contention window ladder") {
  const MacParams p;
  int cw = p.cw_min;
  std::vector<int> seen{cw};
  for (int k = 0; k < 8; ++k) seen.push_back(cw = escalate_cw(cw, p));
  CHECK(seen == std::vector<int>{15, 31, 63, 127, 255, 511, 1023, 1023, 1023});
}

TEST_CASE("AMPDU sizing") {
  const double mcs0 = 980.0 * 2.0 * 0.5 / 13.6e-6;
  const double mcs13 = 980.0 * 2.0 * 10.0 / 13.6e-6;
  CHECK(ampdu_size(mcs0, 5e-3, 1000, 12000) == 30);
  CHECK(ampdu_size(mcs13, 5e-3, 1000, 12000) == 600);
  CHECK(ampdu_size(mcs13, 5e-3, 7, 12000) == 7);
  CHECK(ampdu_size(mcs13, 5e-3, 0, 12000) == 0);
}

TEST_CASE("unique minimum wins; losers keep residual backoff") {
  const MacParams p;
  Rng rng(1);
  ContentionState s({5, 2, 9}, {15, 15, 63});
  const auto r = contend(s, p, rng);
  REQUIRE(r.winner.has_value());
  CHECK(*r.winner == 1);
  CHECK(r.slots == 2);
  CHECK(s.backoff(0) == 3);
  CHECK(s.backoff(2) == 7);
  CHECK(s.cw(2) == 63);
  CHECK(s.cw(1) == p.cw_min);
  CHECK(s.backoff(1) <= p.cw_min);
}

TEST_CASE("ties collide and escalate") {
  const MacParams p;
  Rng rng(2);
  ContentionState s({4, 4, 6}, {15, 15, 15});
  const auto r = contend(s, p, rng);
  CHECK(r.collided());
  CHECK(r.colliders == std::vector<std::size_t>{0, 1});
  CHECK(s.cw(0) == 31);
  CHECK(s.cw(1) == 31);
  CHECK(s.cw(2) == 15);
  CHECK(s.backoff(2) == 2);
  CHECK(s.backoff(0) <= 31);
}

TEST_CASE("two fresh APs collide with probability 16/256") {
  const MacParams p;
  Rng rng(12345);
  const int trials = 200000;
  int collisions = 0;
  for (int k = 0; k < trials; ++k) {
    ContentionState s(2, p, rng);
    collisions += contend(s, p, rng).collided() ? 1 : 0;
  }
  const double freq = static_cast<double>(collisions) / trials;
  // 4 standard deviations of a Bernoulli(1/16) mean over 2e5 trials.
  CHECK(std::abs(freq - 1.0 / 16.0) < 4.0 * std::sqrt(1.0 / 16.0 * 15.0 / 16.0 / trials));
}

TEST_CASE("explicit contention state validation") {
  CHECK_THROWS(ContentionState({1, 2}, {15}));
  CHECK_THROWS(ContentionState({20}, {15}));
}

TEST_CASE("TXOP data phase without frame errors") {
  const MacParams mac;
  PhyParams phy;
  phy.per = 0.0;
  const double rate = 980.0 * 2.0 * 0.5 / 13.6e-6;
  SrGroup g;
  g.members.push_back({{0, 0}, 0, rate, 0, rate});
  g.members.push_back({{1, 1}, 0, rate, 0, rate});
  std::vector<StaQueue> queues(2);
  std::vector<double> ts(50);
  for (int k = 0; k < 50; ++k) ts[k] = 0.001 * k;
  queues[0].enqueue(ts);
  Rng rng(0);
  const auto out = run_txop(3, g, queues, mac, phy, rng, 1.0, 100e-6, 0);
  REQUIRE(out.members.size() == 2);
  CHECK(out.members[0].sent == 30);
  CHECK(out.members[0].delivered == 30);
  CHECK(out.members[1].sent == 0);
  CHECK(queues[0].size() == 20);
  const double end = 1.0 + txop_overhead(mac) + mac.txop_max_s;
  CHECK(out.members[0].delays.front() == doctest::Approx(end));
  CHECK(out.airtime_s == doctest::Approx(100e-6 + txop_overhead(mac) + mac.txop_max_s));
  CHECK(*out.selected_group == 3);

  std::vector<StaQueue> empty(2);
  CHECK_THROWS_AS(run_txop(0, g, empty, mac, phy, rng, 0.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("frame errors thin deliveries binomially") {
  const MacParams mac;
  PhyParams phy;  // PER = 1e-2
  const double rate = 980.0 * 2.0 * 10.0 / 13.6e-6;
  SrGroup g;
  g.members.push_back({{0, 0}, 13, rate, 13, rate});
  Rng rng(5);
  std::size_t sent = 0, delivered = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<StaQueue> q(1);
    std::vector<double> ts(600, 0.0);
    q[0].enqueue(ts);
    const auto out = run_txop(0, g, q, mac, phy, rng, 0.0, 0.0, 0);
    sent += out.members[0].sent;
    delivered += out.members[0].delivered;
    CHECK(q[0].size() == out.members[0].sent - out.members[0].delivered);
  }
  CHECK(sent == 120000);
  CHECK(static_cast<double>(delivered) / sent == doctest::Approx(0.99).epsilon(0.002));
}
