#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cacperf/errors.hpp"

namespace cacperf {

/// One traffic class of the loss system. Classes are listed in priority
/// order: index 0 is admitted longest (voice), the last class is cut off
/// first.
struct TrafficClassSpec {
  std::string name;
  double arrival_rate = 0.0;     // calls per unit time
  double service_rate = 1.0;     // departures per unit time per call
  int bandwidth = 1;             // channels held by one admitted call
  int admission_threshold = 1;   // free channels required to admit

  bool operator==(const TrafficClassSpec&) const = default;
};

/// A complete scenario: pooled capacity plus the traffic classes.
/// RAT labels are carried through to reports and never change the model.
struct SystemConfig {
  int capacity = 1;
  std::vector<TrafficClassSpec> classes;
  std::vector<std::string> rat_labels;

  std::size_t class_count() const noexcept { return classes.size(); }
  bool operator==(const SystemConfig&) const = default;
};

/// Every violated invariant, in a stable order. Empty means valid.
std::vector<std::string> config_violations(const SystemConfig& cfg);

/// Returns `cfg` unchanged or throws ConfigError listing every violation.
SystemConfig validate_config(const SystemConfig& cfg);

/// Per-class in-service call counts.
struct SystemState {
  std::vector<int> occupancy;

  bool operator==(const SystemState&) const = default;
  auto operator<=>(const SystemState&) const = default;
};

int occupied_channels(const SystemState& state, const SystemConfig& cfg);
int free_channels(const SystemState& state, const SystemConfig& cfg);

/// Threshold rule on a free-channel count: class `class_index` is admitted
/// iff `free >= A_i`. Throws std::out_of_range on a bad index.
bool admissible_with_free(int free, std::size_t class_index, const SystemConfig& cfg);

bool admissible(const SystemState& state, std::size_t class_index, const SystemConfig& cfg);

inline constexpr std::size_t kDefaultStateLimit = 2'000'000;

/// Lexicographically ordered set of all feasible occupancy vectors.
class StateSpace {
 public:
  StateSpace() = default;

  std::size_t size() const noexcept { return states_.size(); }
  std::size_t class_count() const noexcept { return class_count_; }
  const SystemState& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<SystemState>& states() const noexcept { return states_; }

  /// Ordinal of `state`, or nullopt if it is infeasible or malformed.
  std::optional<std::size_t> index_of(const SystemState& state) const;

  /// Channels in use for the state at ordinal `i`.
  int occupied(std::size_t i) const { return occupied_[i]; }

 private:
  friend StateSpace enumerate_states(const SystemConfig&, std::size_t);

  std::vector<SystemState> states_;
  std::vector<int> occupied_;
  std::size_t class_count_ = 0;
};

/// All states with sum(n_i * b_i) <= N in lexicographic order. Throws
/// StateSpaceLimitError once more than `max_states` states are produced.
StateSpace enumerate_states(const SystemConfig& cfg, std::size_t max_states = kDefaultStateLimit);

/// Number of feasible states, counted without materializing them.
std::uint64_t count_states(const SystemConfig& cfg);

}  // namespace cacperf
