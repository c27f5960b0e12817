#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "cacperf/analytic.hpp"
#include "cacperf/model.hpp"
#include "cacperf/sim.hpp"

namespace cacperf {

// Declaration order is the row order inside one (lambda, class) group.
enum class SweepMode { ctmc, literal1d, recurrence, sim };

const char* to_string(SweepMode mode);
SweepMode parse_sweep_mode(std::string_view token);

struct SweepSpec {
  SystemConfig base_config;
  std::size_t swept_class = 0;  // 0-based
  std::vector<double> grid;     // arrival rates for the swept class
  std::vector<SweepMode> modes{SweepMode::ctmc};
  std::optional<SimParams> sim_params;
};

std::vector<std::string> sweep_violations(const SweepSpec& spec);

struct SweepRow {
  double lambda = 0.0;
  std::optional<std::size_t> class_index;  // nullopt for the overall row
  SweepMode mode = SweepMode::ctmc;
  std::optional<double> blocking;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// `count` evenly spaced points from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, std::size_t count);

/// Evaluates every mode at every grid point. Rows are ordered by grid
/// point, then class (overall last), then mode. Simulation at grid point g
/// uses seed derive_seed(sim_params.seed, g).
SweepResult run_sweep(const SweepSpec& spec);

struct ClassComparison {
  double analytic = 0.0;
  std::optional<double> estimate;
  std::optional<double> half_width;
  std::optional<double> deviation;
  bool covered = false;
};

struct ComparisonReport {
  std::vector<ClassComparison> per_class;
  double max_deviation = 0.0;
  double coverage_fraction = 0.0;
  bool degenerate = false;  // no traffic offered, nothing to compare
  BlockingReport analytic;
  SimStats simulated;
};

/// ctmc solution versus a Markovian simulation of the same scenario.
ComparisonReport compare_analytic_sim(const SystemConfig& cfg, const SimParams& sim_params);

/// The scenario used throughout the docs and tests: N = 20, classes
/// voice/web/file with b = (1, 2, 3), A = (1, 3, 5), mu = 1, lambda = 1.
SystemConfig default_scenario();

}  // namespace cacperf
