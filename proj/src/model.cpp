#include "cacperf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace cacperf {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::ostringstream out;
  out << "invalid configuration";
  for (const auto& l : lines) out << "\n  " << l;
  return out.str();
}

std::string field(std::size_t i, const char* name) {
  return "classes[" + std::to_string(i) + "]." + name;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_lines(violations)), violations_(std::move(violations)) {}

std::vector<std::string> config_violations(const SystemConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.capacity < 1) {
    out.push_back("capacity: must be >= 1 (got " + std::to_string(cfg.capacity) + ")");
  }
  if (cfg.classes.empty()) {
    out.push_back("classes: class list is empty");
    return out;
  }
  for (std::size_t i = 0; i < cfg.classes.size(); ++i) {
    const auto& c = cfg.classes[i];
    if (!(std::isfinite(c.arrival_rate) && c.arrival_rate >= 0.0)) {
      out.push_back(field(i, "arrival_rate") + ": must be finite and >= 0");
    }
    if (!(std::isfinite(c.service_rate) && c.service_rate > 0.0)) {
      out.push_back(field(i, "service_rate") + ": must be finite and > 0");
    }
    if (c.bandwidth < 1) {
      out.push_back(field(i, "bandwidth") + ": must be >= 1 (got " + std::to_string(c.bandwidth) + ")");
    }
    if (c.admission_threshold < c.bandwidth || c.admission_threshold < 1) {
      out.push_back(field(i, "admission_threshold") + ": must be >= 1 and >= bandwidth (got " +
                    std::to_string(c.admission_threshold) + ")");
    }
    if (c.admission_threshold > cfg.capacity) {
      out.push_back(field(i, "admission_threshold") + ": threshold exceeds capacity (" +
                    std::to_string(c.admission_threshold) + " > " + std::to_string(cfg.capacity) + ")");
    }
    if (i > 0 && c.admission_threshold < cfg.classes[i - 1].admission_threshold) {
      out.push_back(field(i, "admission_threshold") + ": thresholds not non-decreasing (" +
                    std::to_string(cfg.classes[i - 1].admission_threshold) + " then " +
                    std::to_string(c.admission_threshold) + ")");
    }
  }
  return out;
}

SystemConfig validate_config(const SystemConfig& cfg) {
  auto v = config_violations(cfg);
  if (!v.empty()) throw ConfigError(std::move(v));
  return cfg;
}

int occupied_channels(const SystemState& state, const SystemConfig& cfg) {
  if (state.occupancy.size() != cfg.classes.size()) {
    throw std::invalid_argument("state dimension does not match class count");
  }
  int used = 0;
  for (std::size_t i = 0; i < state.occupancy.size(); ++i) {
    used += state.occupancy[i] * cfg.classes[i].bandwidth;
  }
  return used;
}

int free_channels(const SystemState& state, const SystemConfig& cfg) {
  return cfg.capacity - occupied_channels(state, cfg);
}

bool admissible_with_free(int free, std::size_t class_index, const SystemConfig& cfg) {
  if (class_index >= cfg.classes.size()) {
    throw std::out_of_range("class index " + std::to_string(class_index) + " out of range");
  }
  return free >= cfg.classes[class_index].admission_threshold;
}

bool admissible(const SystemState& state, std::size_t class_index, const SystemConfig& cfg) {
  if (class_index >= cfg.classes.size()) {
    throw std::out_of_range("class index " + std::to_string(class_index) + " out of range");
  }
  return admissible_with_free(free_channels(state, cfg), class_index, cfg);
}

std::optional<std::size_t> StateSpace::index_of(const SystemState& state) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), state);
  if (it == states_.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

StateSpace enumerate_states(const SystemConfig& cfg, std::size_t max_states) {
  if (cfg.classes.empty() || cfg.capacity < 0) {
    throw std::invalid_argument("enumerate_states: invalid configuration");
  }
  StateSpace space;
  space.class_count_ = cfg.classes.size();
  const std::size_t k = cfg.classes.size();
  std::vector<int> current(k, 0);

  // Depth-first with increasing counts per position yields lexicographic order.
  auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos == k) {
      if (space.states_.size() >= max_states) {
        throw StateSpaceLimitError("state space exceeds " + std::to_string(max_states) +
                                   " states; reduce capacity or use the literal1d mode");
      }
      space.states_.push_back(SystemState{current});
      space.occupied_.push_back(cfg.capacity - remaining);
      return;
    }
    const int b = cfg.classes[pos].bandwidth;
    for (int n = 0; n * b <= remaining; ++n) {
      current[pos] = n;
      self(self, pos + 1, remaining - n * b);
    }
    current[pos] = 0;
  };
  recurse(recurse, 0, cfg.capacity);
  return space;
}

std::uint64_t count_states(const SystemConfig& cfg) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // ways[c] = number of occupancy vectors using exactly c channels
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(std::max(cfg.capacity, 0)) + 1, 0);
  ways[0] = 1;
  for (const auto& c : cfg.classes) {
    const auto b = static_cast<std::size_t>(c.bandwidth);
    for (std::size_t used = b; used < ways.size(); ++used) {
      ways[used] = (ways[used] > kMax - ways[used - b]) ? kMax : ways[used] + ways[used - b];
    }
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = (total > kMax - w) ? kMax : total + w;
  return total;
}

}  // namespace cacperf
