#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapc/srgroups.hpp"
#include "mapc/traffic.hpp"

namespace mapc {

using ActionMask = std::vector<std::uint8_t>;

/// Snapshot handed to the scheduler at a decision point: the buffer status
/// gathered by the ICR responses plus the episode's action catalog.
struct SchedulerState {
  double now = 0.0;
  std::vector<std::size_t> queue_len;     // rho_i
  std::vector<std::optional<double>> hol;  // epsilon_i, empty queue -> nullopt
  std::vector<double> serving_gain;        // h_i
  const GroupCatalog* catalog = nullptr;
  ActionMask mask;
  double txop_data_s = 5e-3;
  int frame_bits = 12000;

  std::size_t sta_count() const { return queue_len.size(); }
  bool any_pending() const;
};

/// m_z = 1 iff some member of group z has buffered frames.
ActionMask online_mask(const GroupCatalog& catalog, std::span<const std::size_t> queue_len);
ActionMask online_mask(const GroupCatalog& catalog, std::span<const StaQueue> queues);

/// Frames group z could carry in this TXOP, capped per member by AMPDU capacity.
std::size_t schedulable_packets(const SchedulerState& s, ActionId z);

/// Alignment cost of group z: spread of HoL arrival times over its active members.
double alignment_cost(const SchedulerState& s, ActionId z);
std::size_t active_members(const SchedulerState& s, ActionId z);

/// Max schedulable packets; ties -> lowest id.
ActionId schedule_mnp(const SchedulerState& s);
/// Group containing the oldest HoL STA (ties -> lowest STA index), then max
/// schedulable packets, then lowest id.
ActionId schedule_op(const SchedulerState& s);
/// Min alignment cost; ties -> more active members, older min HoL, lowest id.
ActionId schedule_tat(const SchedulerState& s);

using Scheduler = std::function<ActionId(const SchedulerState&)>;

/// "mnp", "op" or "tat". Throws ConfigError otherwise ("external" is served
/// through the environment protocol, not in-process).
Scheduler make_heuristic(const std::string& name);
bool is_heuristic(const std::string& name);

}  // namespace mapc
