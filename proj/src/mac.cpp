#include "mapc/mac.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "mapc/errors.hpp"

namespace mapc {

void MacParams::validate() const {
  for (double d : {icf_s, icr_s, tf_s, back_s, sifs_s, difs_s, slot_s, txop_max_s}) {
    if (!(d > 0.0)) throw ConfigError("MAC durations must be positive");
  }
  if (cw_min < 1 || cw_min > cw_max) throw ConfigError("need 1 <= CW_min <= CW_max");
}

double collision_penalty(const MacParams& p) {
  return p.icf_s + p.sifs_s + p.icr_s + p.difs_s + p.slot_s;
}

double txop_overhead(const MacParams& p) {
  return p.icf_s + p.sifs_s + p.icr_s + p.sifs_s + p.tf_s + p.sifs_s + p.sifs_s + p.back_s + p.difs_s;
}

int escalate_cw(int cw, const MacParams& p) { return std::min(2 * (cw + 1) - 1, p.cw_max); }

std::size_t ampdu_size(double rate_bps, double t_data_s, std::size_t queue_len, int frame_bits) {
  if (!(t_data_s > 0.0)) throw std::invalid_argument("ampdu_size: data window must be positive");
  const double capacity = std::floor(t_data_s * rate_bps / frame_bits);
  return std::min(queue_len, static_cast<std::size_t>(std::max(capacity, 0.0)));
}

ContentionState::ContentionState(std::size_t ap_count, const MacParams& p, Rng& rng)
    : backoff_(ap_count, 0), cw_(ap_count, p.cw_min) {
  for (std::size_t ap = 0; ap < ap_count; ++ap) redraw(ap, p.cw_min, rng);
}

ContentionState::ContentionState(std::vector<int> backoff, std::vector<int> cw)
    : backoff_(std::move(backoff)), cw_(std::move(cw)) {
  if (backoff_.size() != cw_.size() || backoff_.empty()) {
    throw std::invalid_argument("ContentionState: backoff/cw size mismatch");
  }
  for (std::size_t ap = 0; ap < backoff_.size(); ++ap) {
    if (backoff_[ap] < 0 || backoff_[ap] > cw_[ap]) {
      throw std::invalid_argument("ContentionState: backoff outside [0, CW]");
    }
  }
}

void ContentionState::redraw(std::size_t ap, int cw, Rng& rng) {
  cw_.at(ap) = cw;
  backoff_.at(ap) = std::uniform_int_distribution<int>(0, cw)(rng);
}

void ContentionState::count_down(int slots) {
  for (int& b : backoff_) b -= slots;
}

ContentionResult contend(ContentionState& state, const MacParams& p, Rng& rng) {
  ContentionResult result;
  int smallest = state.backoff(0);
  for (std::size_t ap = 1; ap < state.ap_count(); ++ap) smallest = std::min(smallest, state.backoff(ap));
  result.slots = smallest;
  state.count_down(smallest);
  for (std::size_t ap = 0; ap < state.ap_count(); ++ap) {
    if (state.backoff(ap) == 0) result.colliders.push_back(ap);
  }
  if (result.colliders.size() == 1) {
    result.winner = result.colliders.front();
    result.colliders.clear();
    state.redraw(*result.winner, p.cw_min, rng);
  } else {
    for (std::size_t ap : result.colliders) state.redraw(ap, escalate_cw(state.cw(ap), p), rng);
  }
  return result;
}

TxopOutcome run_txop(ActionId action, const SrGroup& group, std::span<StaQueue> queues,
                     const MacParams& mac, const PhyParams& phy, Rng& rng, double start_s,
                     double contention_s, std::size_t sharing_ap) {
  const bool any_pending = std::any_of(group.members.begin(), group.members.end(),
                                       [&](const GroupMember& m) { return !queues[m.link.sta].empty(); });
  if (!any_pending) throw std::invalid_argument("run_txop: every member queue is empty");

  const double t_data = mac.txop_max_s;
  const double end = start_s + txop_overhead(mac) + t_data;
  const double q = 1.0 - phy.per;

  TxopOutcome out;
  out.sharing_ap = sharing_ap;
  out.selected_group = action;
  out.airtime_s = contention_s + txop_overhead(mac) + t_data;
  for (const GroupMember& m : group.members) {
    StaQueue& queue = queues[m.link.sta];
    MemberOutcome mo;
    mo.sta = m.link.sta;
    mo.sent = ampdu_size(m.rate_cosr, t_data, queue.size(), phy.frame_bits);
    if (mo.sent > 0) {
      mo.delivered = phy.per == 0.0
                         ? mo.sent
                         : std::binomial_distribution<std::size_t>(mo.sent, q)(rng);
    }
    mo.delays = queue.dequeue_delivered(mo.delivered, end);
    out.members.push_back(std::move(mo));
  }
  return out;
}

}  // namespace mapc
