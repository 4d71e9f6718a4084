#include "mapc/sched.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "mapc/errors.hpp"
#include "mapc/mac.hpp"

namespace mapc {

bool SchedulerState::any_pending() const {
  return std::any_of(queue_len.begin(), queue_len.end(), [](std::size_t q) { return q > 0; });
}

ActionMask online_mask(const GroupCatalog& catalog, std::span<const std::size_t> queue_len) {
  ActionMask mask(catalog.size(), 0);
  for (std::size_t z = 0; z < catalog.size(); ++z) {
    for (const auto& m : catalog.groups()[z].members) {
      if (queue_len[m.link.sta] > 0) {
        mask[z] = 1;
        break;
      }
    }
  }
  return mask;
}

ActionMask online_mask(const GroupCatalog& catalog, std::span<const StaQueue> queues) {
  std::vector<std::size_t> lens;
  lens.reserve(queues.size());
  for (const auto& q : queues) lens.push_back(q.size());
  return online_mask(catalog, lens);
}

std::size_t schedulable_packets(const SchedulerState& s, ActionId z) {
  std::size_t total = 0;
  for (const auto& m : (*s.catalog)[z].members) {
    total += ampdu_size(m.rate_cosr, s.txop_data_s, s.queue_len[m.link.sta], s.frame_bits);
  }
  return total;
}

std::size_t active_members(const SchedulerState& s, ActionId z) {
  std::size_t n = 0;
  for (const auto& m : (*s.catalog)[z].members) n += s.queue_len[m.link.sta] > 0 ? 1 : 0;
  return n;
}

namespace {

struct HolSpan {
  double oldest = std::numeric_limits<double>::infinity();
  double newest = -std::numeric_limits<double>::infinity();
  std::size_t active = 0;
};

HolSpan hol_span(const SchedulerState& s, ActionId z) {
  HolSpan span;
  for (const auto& m : (*s.catalog)[z].members) {
    const auto& e = s.hol[m.link.sta];
    if (s.queue_len[m.link.sta] == 0 || !e) continue;
    span.oldest = std::min(span.oldest, *e);
    span.newest = std::max(span.newest, *e);
    ++span.active;
  }
  return span;
}

void require_decision(const SchedulerState& s) {
  if (s.catalog == nullptr) throw std::invalid_argument("scheduler: state has no catalog");
  if (s.mask.size() != s.catalog->size()) throw std::invalid_argument("scheduler: mask size != Z");
  if (std::none_of(s.mask.begin(), s.mask.end(), [](std::uint8_t m) { return m != 0; })) {
    throw std::invalid_argument("scheduler: every action is masked");
  }
}

}  // namespace

double alignment_cost(const SchedulerState& s, ActionId z) {
  const HolSpan span = hol_span(s, z);
  return span.active == 0 ? std::numeric_limits<double>::infinity() : span.newest - span.oldest;
}

ActionId schedule_mnp(const SchedulerState& s) {
  require_decision(s);
  ActionId best = 0;
  std::size_t best_count = 0;
  bool found = false;
  for (ActionId z = 0; z < s.mask.size(); ++z) {
    if (!s.mask[z]) continue;
    const std::size_t count = schedulable_packets(s, z);
    if (!found || count > best_count) {
      best = z;
      best_count = count;
      found = true;
    }
  }
  return best;
}

ActionId schedule_op(const SchedulerState& s) {
  require_decision(s);
  std::optional<std::size_t> oldest;
  for (std::size_t i = 0; i < s.sta_count(); ++i) {
    if (s.queue_len[i] == 0 || !s.hol[i]) continue;
    if (!oldest || *s.hol[i] < *s.hol[*oldest]) oldest = i;
  }
  if (!oldest) throw std::invalid_argument("schedule_op: no STA has a HoL packet");

  std::optional<ActionId> best;
  std::size_t best_count = 0;
  for (ActionId z : s.catalog->groups_of(*oldest)) {
    if (!s.mask[z]) continue;
    const std::size_t count = schedulable_packets(s, z);
    if (!best || count > best_count) {
      best = z;
      best_count = count;
    }
  }
  if (!best) throw std::invalid_argument("schedule_op: oldest STA has no unmasked group");
  return *best;
}

ActionId schedule_tat(const SchedulerState& s) {
  require_decision(s);
  std::optional<ActionId> best;
  HolSpan best_span;
  for (ActionId z = 0; z < s.mask.size(); ++z) {
    if (!s.mask[z]) continue;
    const HolSpan span = hol_span(s, z);
    if (span.active == 0) continue;
    if (!best) {
      best = z;
      best_span = span;
      continue;
    }
    const double cost = span.newest - span.oldest;
    const double best_cost = best_span.newest - best_span.oldest;
    bool better = false;
    if (cost != best_cost) {
      better = cost < best_cost;
    } else if (span.active != best_span.active) {
      better = span.active > best_span.active;
    } else {
      better = span.oldest < best_span.oldest;
    }
    if (better) {
      best = z;
      best_span = span;
    }
  }
  if (!best) throw std::invalid_argument("schedule_tat: no group has an active member");
  return *best;
}

bool is_heuristic(const std::string& name) { return name == "mnp" || name == "op" || name == "tat"; }

Scheduler make_heuristic(const std::string& name) {
  if (name == "mnp") return schedule_mnp;
  if (name == "op") return schedule_op;
  if (name == "tat") return schedule_tat;
  throw ConfigError("unknown heuristic scheduler '" + name + "' (expected mnp, op or tat)");
}

}  // namespace mapc
