#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "mapc/engine.hpp"
#include "mapc/scenario.hpp"

namespace mapc {

struct EnvConfig {
  SimConfig sim;
  double h_max = 1e-3;
  double beta = 1e-3;
  double nu = 1e-6;
  std::size_t priority_bins = 5;

  void validate() const;
};

/// Error surfaced to protocol clients; `code` is a stable machine-readable tag.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& msg) : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// r_sh = min(eps) - min(eps'), minima over backlogged STAs. Zero when the
/// global-oldest HoL frame before the TXOP is still at its head afterwards.
/// If every queue is empty afterwards, min(eps) is taken as `now`.
double reward_shaping(std::span<const std::optional<double>> hol_before,
                      std::span<const std::optional<double>> hol_after, double now);

/// r_lg = min(beta / (now - min(eps) + nu), 1); an all-empty system has zero delay.
double reward_longterm(double now, std::span<const std::optional<double>> hol, double beta, double nu);

/// [delay | queue | gain] per STA, each normalized and clamped to [0, 1].
std::vector<double> make_observation(const Simulation& sim, const EnvConfig& cfg);

struct EnvReset {
  std::vector<double> observation;
  ActionMask mask;
  std::size_t sta_count = 0;
  std::size_t action_count = 0;
};

struct EnvStep {
  std::vector<double> observation;
  ActionMask mask;
  double reward = 0.0;
  RewardFields parts;
  bool terminated = false;
  bool truncated = false;  // never set by the simulator
  nlohmann::json info;
};

/// Episodic decision environment: one simulated episode per reset, one TXOP per step.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  /// Builds a fresh scenario for `seed` and runs to the first decision point.
  /// Construction failures surface as ProtocolError("scenario_error").
  EnvReset reset(std::uint64_t seed);
  /// Refuses (ProtocolError, state unchanged) without an active episode, or
  /// for an out-of-range or masked action.
  EnvStep step(ActionId action);

  bool active() const { return sim_ && !sim_->finished(); }
  const Simulation* simulation() const { return sim_.get(); }
  const Scenario* scenario() const { return scenario_.get(); }
  const EnvConfig& config() const { return cfg_; }

 private:
  EnvConfig cfg_;
  std::shared_ptr<const Scenario> scenario_;
  std::unique_ptr<Simulation> sim_;
};

/// Scenario + engine seeding shared by the environment and in-process runs,
/// so both see identical episodes for the same seed.
std::unique_ptr<Simulation> make_episode(const SimConfig& cfg, std::shared_ptr<const Scenario> scenario,
                                         std::uint64_t seed);

}  // namespace mapc
