#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "mapc/mac.hpp"
#include "mapc/rng.hpp"
#include "mapc/scenario.hpp"
#include "mapc/sched.hpp"
#include "mapc/traffic.hpp"

namespace mapc {

struct TraceMember {
  std::size_t sta = 0;
  std::size_t sent = 0;
  std::size_t delivered = 0;
  bool operator==(const TraceMember&) const = default;
};

struct RewardFields {
  double shaping = 0.0;
  double longterm = 0.0;
  double total = 0.0;
  bool operator==(const RewardFields&) const = default;
};

/// One channel-access event: a collision or a completed TXOP.
struct TraceRecord {
  std::size_t seq = 0;
  bool collided = false;
  double time_s = 0.0;  // collision: ICF start; TXOP: decision (ICF) time
  double end_s = 0.0;
  double airtime_s = 0.0;  // includes the preceding backoff slots
  std::vector<std::size_t> colliders;
  std::size_t sharing_ap = 0;
  std::optional<ActionId> action;
  std::vector<TraceMember> members;
  // Rank of the selected group's oldest active member among the HoL delays
  // of all backlogged STAs at decision time, in (0, 1].
  double priority = 0.0;
  std::optional<RewardFields> reward;

  bool operator==(const TraceRecord&) const = default;
};

nlohmann::json to_json(const TraceRecord& r);
void write_trace_jsonl(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Discrete-event engine of one episode. Deterministic given
/// (scenario, config, seed, sequence of actions).
class Simulation {
 public:
  Simulation(std::shared_ptr<const Scenario> scenario, const SimConfig& cfg, std::uint64_t seed);

  /// Runs arrivals, idle fast-forward, contention and collisions until an AP
  /// wins the channel with traffic pending. Returns false once the episode
  /// is over (clock >= T_sim).
  bool advance_to_decision();
  bool at_decision() const { return at_decision_; }
  bool finished() const { return finished_; }

  /// Decision snapshot; valid while at_decision().
  SchedulerState decision_state() const;
  const ActionMask& mask() const { return mask_; }
  std::size_t sharing_ap() const { return sharing_ap_; }

  /// Runs the TXOP for action z. Throws std::invalid_argument if not at a
  /// decision point or z is out of range or masked; state is then unchanged.
  const TraceRecord& execute(ActionId z);

  double now() const { return now_; }
  double idle_time() const { return idle_; }
  double busy_time() const { return busy_; }
  double duration() const { return duration_; }

  std::vector<std::optional<double>> hol() const;
  const std::vector<StaQueue>& queues() const { return queues_; }
  const std::vector<std::vector<double>>& delays() const { return delays_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  TraceRecord& last_record() { return trace_.back(); }
  const Scenario& scenario() const { return *scenario_; }
  std::size_t txop_count() const { return txops_; }
  std::size_t collision_count() const { return collisions_; }

 private:
  void replenish(double t);
  bool queues_empty() const;

  std::shared_ptr<const Scenario> scenario_;
  MacParams mac_;
  PhyParams phy_;
  double duration_;

  std::vector<ArrivalProcess> arrivals_;
  std::vector<StaQueue> queues_;
  Rng contention_rng_;
  Rng delivery_rng_;
  ContentionState contention_;

  double now_ = 0.0;
  double idle_ = 0.0;
  double busy_ = 0.0;
  double pending_contention_ = 0.0;
  bool at_decision_ = false;
  bool finished_ = false;
  std::size_t sharing_ap_ = 0;
  ActionMask mask_;
  std::size_t txops_ = 0;
  std::size_t collisions_ = 0;

  std::vector<std::vector<double>> delays_;
  std::vector<TraceRecord> trace_;
  std::vector<double> arrival_buffer_;
};

/// Drives `sim` to the end of the episode, asking `scheduler` at every decision.
void advance_episode(Simulation& sim, const Scheduler& scheduler);

}  // namespace mapc
