#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mapc/channel.hpp"
#include "mapc/rng.hpp"
#include "mapc/srgroups.hpp"
#include "mapc/traffic.hpp"

namespace mapc {

struct MacParams {
  double icf_s = 74.4e-6;
  double icr_s = 88e-6;
  double tf_s = 74.4e-6;
  double back_s = 100e-6;
  double sifs_s = 16e-6;
  double difs_s = 34e-6;
  double slot_s = 9e-6;
  int cw_min = 15;
  int cw_max = 1023;
  double txop_max_s = 5e-3;

  void validate() const;
};

/// Airtime burnt when no ICR answers the ICF: ICF + SIFS + ICR + DIFS + slot.
double collision_penalty(const MacParams& p);

/// Non-data airtime of a successful TXOP:
/// ICF, SIFS, ICR, SIFS, TF, SIFS, <data>, SIFS, BACK, DIFS.
double txop_overhead(const MacParams& p);

/// CW after a collision: next rung of the 2^k - 1 ladder, capped at CW_max.
int escalate_cw(int cw, const MacParams& p);

/// Frames aggregated for one STA: min(queue, floor(t_data R / L)).
std::size_t ampdu_size(double rate_bps, double t_data_s, std::size_t queue_len, int frame_bits);

/// Per-AP DCF backoff counters and contention windows.
class ContentionState {
 public:
  /// Fresh state: CW = CW_min and a uniform backoff in [0, CW] per AP.
  ContentionState(std::size_t ap_count, const MacParams& p, Rng& rng);
  ContentionState(std::vector<int> backoff, std::vector<int> cw);

  std::size_t ap_count() const { return backoff_.size(); }
  int backoff(std::size_t ap) const { return backoff_.at(ap); }
  int cw(std::size_t ap) const { return cw_.at(ap); }

  void redraw(std::size_t ap, int cw, Rng& rng);
  void count_down(int slots);

 private:
  std::vector<int> backoff_;
  std::vector<int> cw_;
};

struct ContentionResult {
  std::optional<std::size_t> winner;  // empty on collision
  std::vector<std::size_t> colliders;
  int slots = 0;  // idle slots elapsed before the (attempted) transmission

  bool collided() const { return !winner.has_value(); }
};

/// One contention round. The smallest backoff expires after `slots` idle
/// slots; every AP counts down by that many. A unique minimum wins and
/// restarts at CW_min; tied APs collide, escalate their CW and redraw.
/// Losers keep their residual counters.
ContentionResult contend(ContentionState& state, const MacParams& p, Rng& rng);

struct MemberOutcome {
  std::size_t sta = 0;
  std::size_t sent = 0;       // U_i
  std::size_t delivered = 0;  // mu_i
  std::vector<double> delays;
};

struct TxopOutcome {
  std::size_t sharing_ap = 0;
  std::optional<ActionId> selected_group;
  std::vector<MemberOutcome> members;
  double airtime_s = 0.0;  // contention + overhead + data window
  bool collided = false;
};

/// Runs the data phase of a TXOP that begins (ICF on air) at `start_s`
/// after `contention_s` of backoff. Each member sends an AMPDU sized for the
/// full T_max window; mu_i ~ Binomial(U_i, 1 - PER); delivered frames leave
/// the queue with delays stamped at the end of the TXOP. Throws
/// std::invalid_argument if no member has buffered frames.
TxopOutcome run_txop(ActionId action, const SrGroup& group, std::span<StaQueue> queues,
                     const MacParams& mac, const PhyParams& phy, Rng& rng, double start_s,
                     double contention_s, std::size_t sharing_ap);

}  // namespace mapc
