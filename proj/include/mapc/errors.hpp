#pragma once

#include <stdexcept>
#include <string>

namespace mapc {

/// Raised when a deployment/channel realization cannot host a valid episode,
/// e.g. a STA whose interference-free link supports no MCS.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for configuration values that violate a documented invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace mapc
