#include "mapc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mapc {

namespace {
Rng seeded_contention(std::uint64_t seed) { return make_rng(seed, stream::kContention); }
}  // namespace

nlohmann::json to_json(const TraceRecord& r) {
  nlohmann::json j;
  j["seq"] = r.seq;
  j["time"] = r.time_s;
  j["end"] = r.end_s;
  j["airtime"] = r.airtime_s;
  j["collided"] = r.collided;
  if (r.collided) {
    j["colliders"] = r.colliders;
    return j;
  }
  j["winner"] = r.sharing_ap;
  j["action"] = r.action ? nlohmann::json(*r.action) : nlohmann::json(nullptr);
  auto& members = j["members"] = nlohmann::json::array();
  for (const auto& m : r.members) {
    members.push_back({{"sta", m.sta}, {"sent", m.sent}, {"delivered", m.delivered}});
  }
  j["priority"] = r.priority;
  if (r.reward) {
    j["reward_shaping"] = r.reward->shaping;
    j["reward_longterm"] = r.reward->longterm;
    j["reward"] = r.reward->total;
  }
  return j;
}

void write_trace_jsonl(std::ostream& out, const std::vector<TraceRecord>& trace) {
  for (const auto& r : trace) out << to_json(r).dump() << '\n';
}

Simulation::Simulation(std::shared_ptr<const Scenario> scenario, const SimConfig& cfg, std::uint64_t seed)
    : scenario_(std::move(scenario)),
      mac_(cfg.mac),
      phy_(cfg.link.phy),
      duration_(cfg.sim_duration_s),
      contention_rng_(seeded_contention(seed)),
      delivery_rng_(make_rng(seed, stream::kDelivery)),
      contention_(scenario_->deployment.ap_count(), cfg.mac, contention_rng_) {
  const std::size_t n = scenario_->deployment.sta_count();
  arrivals_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    arrivals_.emplace_back(scenario_->traffic.at(i), derive_seed(seed, stream::kArrivalsBase + i));
  }
  queues_.assign(n, StaQueue(cfg.queue_capacity));
  delays_.assign(n, {});
}

void Simulation::replenish(double t) {
  // Arrivals at exactly t are visible at t; nothing arrives at or after T_sim.
  const double bound = t < duration_ ? std::nextafter(t, std::numeric_limits<double>::infinity()) : duration_;
  for (std::size_t i = 0; i < arrivals_.size(); ++i) {
    if (arrivals_[i].next_arrival() >= bound) continue;
    arrival_buffer_.clear();
    arrivals_[i].generate_until(bound, arrival_buffer_);
    queues_[i].enqueue(arrival_buffer_);
  }
}

bool Simulation::queues_empty() const {
  return std::all_of(queues_.begin(), queues_.end(), [](const StaQueue& q) { return q.empty(); });
}

bool Simulation::advance_to_decision() {
  if (at_decision_) return true;
  while (!finished_) {
    if (now_ >= duration_) {
      // Frames that arrived during the final TXOP stay queued as residual.
      replenish(duration_);
      finished_ = true;
      break;
    }
    replenish(now_);
    if (queues_empty()) {
      double next = std::numeric_limits<double>::infinity();
      for (const auto& a : arrivals_) next = std::min(next, a.next_arrival());
      const double target = std::min(next, duration_);
      idle_ += target - now_;
      now_ = target;
      continue;
    }

    const ContentionResult round = contend(contention_, mac_, contention_rng_);
    const double backoff = round.slots * mac_.slot_s;
    if (round.collided()) {
      TraceRecord rec;
      rec.seq = trace_.size();
      rec.collided = true;
      rec.time_s = now_ + backoff;
      rec.airtime_s = backoff + collision_penalty(mac_);
      rec.end_s = now_ + rec.airtime_s;
      rec.colliders = round.colliders;
      now_ = rec.end_s;
      busy_ += rec.airtime_s;
      ++collisions_;
      trace_.push_back(std::move(rec));
      continue;
    }

    now_ += backoff;
    busy_ += backoff;
    if (now_ >= duration_) continue;
    replenish(now_);
    pending_contention_ = backoff;
    sharing_ap_ = *round.winner;
    mask_ = online_mask(scenario_->catalog, queues_);
    at_decision_ = true;
    return true;
  }
  return false;
}

std::vector<std::optional<double>> Simulation::hol() const {
  std::vector<std::optional<double>> out;
  out.reserve(queues_.size());
  for (const auto& q : queues_) out.push_back(q.head());
  return out;
}

SchedulerState Simulation::decision_state() const {
  SchedulerState s;
  s.now = now_;
  s.catalog = &scenario_->catalog;
  s.mask = mask_;
  s.txop_data_s = mac_.txop_max_s;
  s.frame_bits = phy_.frame_bits;
  const auto& dep = scenario_->deployment;
  for (std::size_t i = 0; i < queues_.size(); ++i) {
    s.queue_len.push_back(queues_[i].size());
    s.hol.push_back(queues_[i].head());
    s.serving_gain.push_back(scenario_->channel.gain(dep.sta_node(i), dep.ap_node(dep.serving_ap(i))));
  }
  return s;
}

const TraceRecord& Simulation::execute(ActionId z) {
  if (!at_decision_) throw std::invalid_argument("execute: not at a decision point");
  if (z >= mask_.size()) throw std::invalid_argument("execute: action " + std::to_string(z) + " out of range");
  if (!mask_[z]) throw std::invalid_argument("execute: action " + std::to_string(z) + " is masked");

  const SrGroup& group = scenario_->catalog[z];

  // Priority rank against the HoL delays of every backlogged STA.
  double selected = -std::numeric_limits<double>::infinity();
  for (const auto& m : group.members) {
    if (auto e = queues_[m.link.sta].head()) selected = std::max(selected, now_ - *e);
  }
  std::size_t backlogged = 0;
  std::size_t below = 0;
  for (const auto& q : queues_) {
    if (auto e = q.head()) {
      ++backlogged;
      below += (now_ - *e) <= selected ? 1 : 0;
    }
  }

  TxopOutcome outcome = run_txop(z, group, queues_, mac_, phy_, delivery_rng_, now_,
                                 pending_contention_, sharing_ap_);
  const double data_phase = txop_overhead(mac_) + mac_.txop_max_s;

  TraceRecord rec;
  rec.seq = trace_.size();
  rec.time_s = now_;
  rec.end_s = now_ + data_phase;
  rec.airtime_s = outcome.airtime_s;
  rec.sharing_ap = sharing_ap_;
  rec.action = z;
  rec.priority = static_cast<double>(below) / static_cast<double>(backlogged);
  for (auto& m : outcome.members) {
    rec.members.push_back({m.sta, m.sent, m.delivered});
    auto& sink = delays_[m.sta];
    sink.insert(sink.end(), m.delays.begin(), m.delays.end());
  }

  now_ = rec.end_s;
  busy_ += data_phase;
  ++txops_;
  at_decision_ = false;
  trace_.push_back(std::move(rec));
  return trace_.back();
}

void advance_episode(Simulation& sim, const Scheduler& scheduler) {
  while (sim.advance_to_decision()) sim.execute(scheduler(sim.decision_state()));
}

}  // namespace mapc
