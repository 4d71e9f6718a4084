#include "doctest.h"
#include "mapc/errors.hpp"
#include "mapc/sched.hpp"

using namespace mapc;

namespace {

constexpr double kFast = 980.0 * 2.0 * 10.0 / 13.6e-6;  // 600 frames per 5 ms window

SrGroup group(std::initializer_list<std::size_t> stas, double rate = kFast) {
  SrGroup g;
  for (std::size_t s : stas) g.members.push_back({{s, s}, 13, rate, 13, kFast});
  return g;
}

// STA i is served by AP i. z0..z2 singletons, z3 = {0,1}, z4 = {1,2}.
GroupCatalog toy_catalog() {
  return GroupCatalog({group({0}), group({1}), group({2}), group({0, 1}), group({1, 2})}, 3);
}

SchedulerState state(const GroupCatalog& cat, std::vector<std::size_t> rho,
                     std::vector<std::optional<double>> hol, double now = 10.0) {
  SchedulerState s;
  s.now = now;
  s.queue_len = std::move(rho);
  s.hol = std::move(hol);
  s.serving_gain.assign(s.queue_len.size(), 1e-6);
  s.catalog = &cat;
  s.mask = online_mask(cat, std::span<const std::size_t>(s.queue_len));
  return s;
}

}  // namespace

TEST_CASE("online mask") {
  const auto cat = toy_catalog();
  const std::vector<std::size_t> none{0, 0, 0};
  CHECK(online_mask(cat, std::span<const std::size_t>(none)) == ActionMask{0, 0, 0, 0, 0});
  const std::vector<std::size_t> one{0, 0, 4};
  CHECK(online_mask(cat, std::span<const std::size_t>(one)) == ActionMask{0, 0, 1, 0, 1});
  const std::vector<std::size_t> all{1, 1, 1};
  CHECK(online_mask(cat, std::span<const std::size_t>(all)) == ActionMask{1, 1, 1, 1, 1});
}

TEST_CASE("schedulable packets are capped by AMPDU capacity") {
  GroupCatalog cat({group({0}, 980.0 * 2.0 * 0.5 / 13.6e-6)}, 1);
  const auto s = state(cat, {100}, {1.0});
  CHECK(schedulable_packets(s, 0) == 30);
}

TEST_CASE("MNP") {
  const auto cat = toy_catalog();
  // Two singletons with equal rates: the longer queue wins.
  CHECK(schedule_mnp(state(cat, {10, 0, 3}, {1.0, std::nullopt, 2.0})) == 0);
  // Pair 5+5 beats the best singleton of 8.
  GroupCatalog pair({group({0}), group({1}), group({2}), group({1, 2})}, 3);
  CHECK(schedule_mnp(state(pair, {8, 5, 5}, {1.0, 1.0, 1.0})) == 3);
  // Exact tie: lowest id.
  CHECK(schedule_mnp(state(cat, {4, 0, 4}, {1.0, std::nullopt, 1.0})) == 0);
}

TEST_CASE("OP") {
  const auto cat = toy_catalog();
  // Oldest STA 2 only pairs with an empty partner: z2 and z4 tie, lowest id.
  CHECK(schedule_op(state(cat, {5, 0, 5}, {3.0, std::nullopt, 1.0})) == 2);
  // Oldest STA 0 with a nonempty partner: the pair.
  CHECK(schedule_op(state(cat, {5, 5, 50}, {1.0, 2.0, 3.0})) == 3);
  // Equal HoL: lower index defines the oldest STA.
  CHECK(schedule_op(state(cat, {5, 0, 500}, {1.0, std::nullopt, 1.0})) == 0);
}

TEST_CASE("TAT cost and tie-breaks") {
  const auto cat = toy_catalog();
  const auto s = state(cat, {1, 1, 0}, {1.0, 1.2, std::nullopt});
  CHECK(alignment_cost(s, 3) == doctest::Approx(0.2));
  CHECK(alignment_cost(s, 0) == 0.0);
  CHECK(active_members(s, 3) == 2);
  CHECK(active_members(s, 4) == 1);
  // Cost 0 everywhere except z3; among the zeros the older min HoL wins (STA 0).
  CHECK(schedule_tat(s) == 0);
  // A perfectly aligned pair beats the singletons.
  CHECK(schedule_tat(state(cat, {1, 1, 1}, {1.0, 1.0, 0.5})) == 3);
}

TEST_CASE("heuristic lookup") {
  CHECK(is_heuristic("mnp"));
  CHECK(is_heuristic("op"));
  CHECK(is_heuristic("tat"));
  CHECK_FALSE(is_heuristic("external"));
  CHECK_THROWS_AS(make_heuristic("external"), ConfigError);
  const auto cat = toy_catalog();
  const auto s = state(cat, {3, 2, 1}, {1.0, 2.0, 3.0});
  CHECK(make_heuristic("op")(s) == schedule_op(s));
}
