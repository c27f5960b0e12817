#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "cacperf/model.hpp"
#include "cacperf/traffic.hpp"

namespace cacperf {

/// Exponential interarrivals per class and exponential per-call holding.
struct MarkovianService {};

/// Holding times drawn from one distribution per class.
struct TraceDrivenService {
  std::vector<DistributionSpec> holding;
};

using ServiceModel = std::variant<MarkovianService, TraceDrivenService>;

struct SimParams {
  double horizon = 1e5;
  std::optional<double> warmup;  // defaults to 10% of the horizon
  std::size_t replications = 10;
  std::uint64_t seed = 1;
  ServiceModel service_model = MarkovianService{};

  double effective_warmup() const { return warmup.value_or(0.1 * horizon); }
};

std::vector<std::string> sim_params_violations(const SimParams& p);

/// Raw counters of one replication (or one batch of a trace-driven run).
struct ReplicationStats {
  std::vector<std::uint64_t> offered;
  std::vector<std::uint64_t> blocked;
  std::vector<double> occupancy_time;  // time spent at each total occupancy 0..N
  double observed_time = 0.0;
  std::uint64_t events = 0;
};

struct ClassSimStats {
  std::uint64_t offered = 0;
  std::uint64_t blocked = 0;
  std::optional<double> blocking;    // absent when nothing was offered
  std::optional<double> half_width;  // absent with fewer than two samples
};

struct SimStats {
  std::vector<ClassSimStats> per_class;
  std::optional<double> overall;
  std::optional<double> overall_half_width;
  std::vector<double> occupancy_histogram;  // time fractions over 0..N
  std::size_t replications = 0;

  bool degenerate() const noexcept { return !overall.has_value(); }
};

/// Two-sided 95% Student-t quantile with `dof` degrees of freedom.
double student_t_975(std::size_t dof);

/// One Markovian replication; deterministic in (seed, replication_index).
ReplicationStats run_replication(const SystemConfig& cfg, const SimParams& params, std::size_t replication_index);

/// Independent replications with seeds derived from `params.seed`; means
/// and 95% Student-t half-widths across replications.
SimStats run_simulation(const SystemConfig& cfg, const SimParams& params);

/// Arrivals from `trace`, holding times from `holding`. The observation
/// window after warmup is cut into `params.replications` equal batches
/// that play the role of replications (batch means).
SimStats run_trace_driven(const SystemConfig& cfg, const ArrivalTrace& trace,
                          const std::vector<DistributionSpec>& holding, const SimParams& params);

/// Reduces per-replication counters to SimStats, in index order.
SimStats aggregate(const std::vector<ReplicationStats>& runs, std::size_t class_count);

}  // namespace cacperf
