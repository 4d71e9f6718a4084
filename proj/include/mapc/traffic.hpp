#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapc/rng.hpp"

namespace mapc {

enum class TrafficModel { Poisson, Bursty };

std::string to_string(TrafficModel m);
TrafficModel traffic_model_from_string(const std::string& s);

struct TrafficProfile {
  TrafficModel model = TrafficModel::Poisson;
  double load_mbps = 10.0;
  double on_mean_s = 1e-3;
  double off_mean_s = 10e-3;
  int frame_bits = 12000;

  /// Long-run packet rate omega / L, packets per second.
  double packet_rate() const { return load_mbps * 1e6 / frame_bits; }
  /// Packet rate while ON, so the long-run mean matches packet_rate().
  double on_packet_rate() const { return packet_rate() * (on_mean_s + off_mean_s) / on_mean_s; }
  void validate() const;
};

/// Lazily materialized arrival stream of one STA. Time only moves forward;
/// each call consumes the interval [t0, t1).
class ArrivalProcess {
 public:
  ArrivalProcess(TrafficProfile profile, std::uint64_t seed);

  /// Arrival timestamps in [t0, t1), sorted. Arrivals the process generated
  /// before t0 (an interval the caller skipped) are discarded.
  std::vector<double> arrivals_in(double t0, double t1);
  /// Appends arrivals in [cursor, t1) to out.
  void generate_until(double t1, std::vector<double>& out);

  /// Timestamp of the next arrival not yet returned.
  double next_arrival() const { return next_; }
  /// Time the process has been advanced to.
  double cursor() const { return cursor_; }
  /// Time up to which the ON/OFF state is known: cursor() or the start of
  /// the state holding next_arrival(), whichever is later.
  double horizon() const;
  /// Time spent ON over [0, horizon()]. Poisson sources are always ON.
  double on_time() const;
  const TrafficProfile& profile() const { return profile_; }

 private:
  void draw_next();

  TrafficProfile profile_;
  Rng rng_;
  double cursor_ = 0.0;
  double next_ = 0.0;
  // Bursty state machine.
  bool on_ = true;
  double state_start_ = 0.0;
  double state_end_ = 0.0;
  double on_accum_ = 0.0;
};

/// FIFO of frame arrival timestamps for one STA.
class StaQueue {
 public:
  explicit StaQueue(std::size_t capacity = 10000);

  /// Appends sorted timestamps (none older than the current tail); frames
  /// beyond capacity are dropped and counted.
  void enqueue(std::span<const double> timestamps);
  /// Removes min(delivered, size()) oldest frames and returns their delays
  /// `now - arrival`, oldest first.
  std::vector<double> dequeue_delivered(std::size_t delivered, double now);

  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  std::size_t capacity() const { return capacity_; }
  /// Arrival time of the head-of-line frame.
  std::optional<double> head() const;
  const std::deque<double>& frames() const { return frames_; }

  std::uint64_t arrivals_total() const { return arrivals_; }
  std::uint64_t delivered_total() const { return delivered_; }
  std::uint64_t drop_count() const { return dropped_; }

 private:
  std::deque<double> frames_;
  std::size_t capacity_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t delivered_ = 0;
  std::uint64_t dropped_ = 0;
};

}  // namespace mapc
