#include "mapc/traffic.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

#include "mapc/errors.hpp"

namespace mapc {

namespace {
constexpr double kNever = std::numeric_limits<double>::infinity();

double exponential(Rng& rng, double rate) { return std::exponential_distribution<double>(rate)(rng); }
}  // namespace

std::string to_string(TrafficModel m) { return m == TrafficModel::Poisson ? "poisson" : "bursty"; }

TrafficModel traffic_model_from_string(const std::string& s) {
  if (s == "poisson" || s == "Poisson") return TrafficModel::Poisson;
  if (s == "bursty" || s == "Bursty") return TrafficModel::Bursty;
  throw ConfigError("unknown traffic model '" + s + "'");
}

void TrafficProfile::validate() const {
  if (!(load_mbps > 0.0)) throw ConfigError("traffic load must be positive");
  if (frame_bits <= 0) throw ConfigError("frame length must be positive");
  if (model == TrafficModel::Bursty && !(on_mean_s > 0.0 && off_mean_s > 0.0)) {
    throw ConfigError("bursty ON/OFF means must be positive");
  }
}

ArrivalProcess::ArrivalProcess(TrafficProfile profile, std::uint64_t seed)
    : profile_(profile), rng_(seed) {
  profile_.validate();
  if (profile_.model == TrafficModel::Bursty) {
    // Start in the stationary regime; exponential dwell times are memoryless,
    // so the residual of the initial state is a fresh draw.
    const double p_on = profile_.on_mean_s / (profile_.on_mean_s + profile_.off_mean_s);
    on_ = std::bernoulli_distribution(p_on)(rng_);
    state_end_ = exponential(rng_, 1.0 / (on_ ? profile_.on_mean_s : profile_.off_mean_s));
  }
  draw_next();
}

void ArrivalProcess::draw_next() {
  if (profile_.model == TrafficModel::Poisson) {
    next_ = cursor_ + exponential(rng_, profile_.packet_rate());
    return;
  }
  const double rate = profile_.on_packet_rate();
  double t = cursor_;
  for (;;) {
    if (on_) {
      const double candidate = t + exponential(rng_, rate);
      if (candidate < state_end_) {
        next_ = candidate;
        return;
      }
    }
    // Current state ends before any further arrival: switch state.
    if (on_) on_accum_ += state_end_ - state_start_;
    t = state_end_;
    on_ = !on_;
    state_start_ = t;
    state_end_ = t + exponential(rng_, 1.0 / (on_ ? profile_.on_mean_s : profile_.off_mean_s));
  }
}

void ArrivalProcess::generate_until(double t1, std::vector<double>& out) {
  while (next_ < t1) {
    out.push_back(next_);
    cursor_ = next_;
    draw_next();
  }
  if (t1 > cursor_) cursor_ = t1;
}

std::vector<double> ArrivalProcess::arrivals_in(double t0, double t1) {
  if (t0 > t1) throw std::invalid_argument("arrivals_in: t0 must be <= t1");
  std::vector<double> skipped;
  if (t0 > cursor_) generate_until(t0, skipped);
  std::vector<double> out;
  generate_until(t1, out);
  return out;
}

double ArrivalProcess::horizon() const {
  return profile_.model == TrafficModel::Poisson ? cursor_ : std::max(cursor_, state_start_);
}

double ArrivalProcess::on_time() const {
  if (profile_.model == TrafficModel::Poisson) return cursor_;
  const double h = horizon();
  return on_accum_ + (on_ ? std::min(h, state_end_) - state_start_ : 0.0);
}

StaQueue::StaQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw ConfigError("queue capacity must be positive");
}

void StaQueue::enqueue(std::span<const double> timestamps) {
  double last = frames_.empty() ? -kNever : frames_.back();
  for (double t : timestamps) {
    if (t < last) throw std::invalid_argument("enqueue: timestamps must be nondecreasing");
    last = t;
    ++arrivals_;
    if (frames_.size() >= capacity_) {
      ++dropped_;
      continue;
    }
    frames_.push_back(t);
  }
}

std::vector<double> StaQueue::dequeue_delivered(std::size_t delivered, double now) {
  const std::size_t count = std::min(delivered, frames_.size());
  std::vector<double> delays;
  delays.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    delays.push_back(now - frames_.front());
    frames_.pop_front();
  }
  delivered_ += count;
  return delays;
}

std::optional<double> StaQueue::head() const {
  if (frames_.empty()) return std::nullopt;
  return frames_.front();
}

}  // namespace mapc
