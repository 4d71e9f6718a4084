#include <set>

#include "doctest.h"
#include "mapc/errors.hpp"
#include "mapc/srgroups.hpp"

using namespace mapc;

namespace {

// Two APs with one STA each; gains set directly.
struct TwoLink {
  Deployment dep;
  ChannelRealization ch;
};

TwoLink two_link(double serving, double cross) {
  const auto rooms = row_layout(2, 30.0);
  Deployment dep(rooms, {rooms[0].center(), rooms[1].center()}, {{20, 15}, {40, 15}}, {0, 1});
  // Nodes: AP0, AP1, STA0, STA1.
  std::vector<double> g(16, 1e-20);
  auto set = [&](std::size_t a, std::size_t b, double v) { g[a * 4 + b] = g[b * 4 + a] = v; };
  set(2, 0, serving);
  set(3, 1, serving);
  set(2, 1, cross);
  set(3, 0, cross);
  set(0, 1, 1e-9);
  return {dep, ChannelRealization(4, g, std::vector<double>(16, 0.0))};
}

}  // namespace

TEST_CASE("candidate enumeration counts") {
  DeploymentConfig cfg;
  CHECK(enumerate_candidates(generate_deployment(cfg, 1)).size() == 624);
  cfg.ap_count = 1;
  cfg.stas_per_ap = 1;
  CHECK(enumerate_candidates(generate_deployment(cfg, 1)).size() == 1);
  cfg.ap_count = 2;
  cfg.stas_per_ap = 2;
  const auto c = enumerate_candidates(generate_deployment(cfg, 1));
  CHECK(c.size() == 8);
  std::set<std::vector<Link>> unique(c.begin(), c.end());
  CHECK(unique.size() == c.size());
  CHECK(std::is_sorted(c.begin(), c.end()));
  for (const auto& cand : c) {
    for (std::size_t k = 1; k < cand.size(); ++k) CHECK(cand[k - 1].ap < cand[k].ap);
  }
}

TEST_CASE("isolated links are admitted together") {
  const TwoLink t = two_link(1e-7, 1e-14);
  const LinkModel model;
  const Link pair[] = {{0, 0}, {1, 1}};
  const auto g = admit_group(pair, t.dep, t.ch, model);
  REQUIRE(g.has_value());
  CHECK(g->size() == 2);
  CHECK(g->members[0].mcs_cosr == 13);
  CHECK(g->members[0].rate_cosr == g->members[0].rate_single);
}

TEST_CASE("admission is inclusive at a rate ratio of exactly one half") {
  // SNR 48 dB alone (MCS 13), SINR just under 20 dB together (MCS 7, half the rate).
  const TwoLink t = two_link(1e-7, 1e-9);
  const LinkModel model;
  const Link pair[] = {{0, 0}, {1, 1}};
  const auto g = admit_group(pair, t.dep, t.ch, model);
  REQUIRE(g.has_value());
  CHECK(g->members[0].mcs_cosr == 7);
  CHECK(g->members[0].mcs_single == 13);
  CHECK(2.0 * g->members[0].rate_cosr / g->members[0].rate_single == 1.0);
}

TEST_CASE("strong interference rejects the pair but keeps singletons") {
  const TwoLink t = two_link(1e-7, 3e-9);
  const LinkModel model;
  const Link pair[] = {{0, 0}, {1, 1}};
  CHECK_FALSE(admit_group(pair, t.dep, t.ch, model).has_value());
  const auto cat = build_catalog(t.dep, t.ch, model);
  CHECK(cat.size() == 2);
  CHECK(cat.singleton_of(0) != cat.singleton_of(1));
  CHECK(cat.groups_of(0).size() == 1);
}

TEST_CASE("unusable link is a scenario error") {
  const TwoLink t = two_link(1e-20, 1e-20);
  CHECK_THROWS_AS(single_tx_rate(0, t.dep, t.ch, LinkModel{}), ScenarioError);
  CHECK_THROWS_AS(build_catalog(t.dep, t.ch, LinkModel{}), ScenarioError);
}

TEST_CASE("catalog on a random deployment") {
  const Deployment dep = generate_deployment(DeploymentConfig{}, 21);
  const auto ch = realize_channel(dep, ChannelParams{}, 21);
  const auto cat = build_catalog(dep, ch, LinkModel{});
  CHECK(cat.size() >= dep.sta_count());
  CHECK(cat.size() <= 624);
  for (std::size_t i = 0; i < dep.sta_count(); ++i) {
    const ActionId z = cat.singleton_of(i);
    CHECK(cat[z].members[0].rate_cosr == cat[z].members[0].rate_single);
    for (ActionId g : cat.groups_of(i)) CHECK(cat[g].contains(i));
  }
  for (const auto& g : cat.groups()) {
    for (const auto& m : g.members) {
      CHECK(static_cast<double>(g.size()) * m.rate_cosr >= m.rate_single);
      CHECK(m.rate_cosr <= m.rate_single);
    }
  }
  const auto j = to_json(cat);
  CHECK(j["z"] == cat.size());
  CHECK(j["n"] == dep.sta_count());
  CHECK(j["groups"].size() == cat.size());
}
