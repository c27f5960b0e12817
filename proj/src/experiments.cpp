#include "cacperf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cacperf/errors.hpp"
#include "cacperf/random.hpp"

namespace cacperf {

const char* to_string(SweepMode mode) {
  switch (mode) {
    case SweepMode::ctmc: return "ctmc";
    case SweepMode::literal1d: return "literal1d";
    case SweepMode::recurrence: return "recurrence";
    case SweepMode::sim: return "sim";
  }
  return "unknown";
}

SweepMode parse_sweep_mode(std::string_view token) {
  if (token == "ctmc") return SweepMode::ctmc;
  if (token == "literal1d") return SweepMode::literal1d;
  if (token == "recurrence") return SweepMode::recurrence;
  if (token == "sim") return SweepMode::sim;
  throw ModeError("unknown sweep mode '" + std::string(token) + "'");
}

std::vector<std::string> sweep_violations(const SweepSpec& spec) {
  std::vector<std::string> v;
  if (spec.swept_class >= spec.base_config.class_count()) v.push_back("sweep.class is out of range");
  if (spec.grid.empty()) v.push_back("sweep.grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!(std::isfinite(spec.grid[i]) && spec.grid[i] >= 0.0)) v.push_back("sweep.grid values must be >= 0");
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) v.push_back("sweep.grid must be strictly increasing");
  }
  if (spec.modes.empty()) v.push_back("sweep.modes is empty");
  if (std::find(spec.modes.begin(), spec.modes.end(), SweepMode::sim) != spec.modes.end() && !spec.sim_params) {
    v.push_back("sweep mode 'sim' needs simulation parameters");
  }
  return v;
}

std::vector<double> linear_grid(double from, double to, std::size_t count) {
  if (count == 0) throw std::invalid_argument("grid needs at least one point");
  if (count == 1) return {from};
  std::vector<double> grid(count);
  const double step = (to - from) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = from + step * static_cast<double>(i);
  grid.back() = to;
  return grid;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate_config(spec.base_config);
  if (auto v = sweep_violations(spec); !v.empty()) throw ConfigError(std::move(v));

  auto modes = spec.modes;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
  const std::size_t k = spec.base_config.class_count();

  SweepResult result;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    SystemConfig cfg = spec.base_config;
    cfg.classes[spec.swept_class].arrival_rate = spec.grid[g];

    // column per mode: per-class values then overall
    struct Column {
      std::vector<std::optional<double>> value;
      std::vector<std::optional<double>> half_width;
    };
    std::vector<Column> columns;
    for (auto mode : modes) {
      Column col;
      col.value.resize(k + 1);
      col.half_width.resize(k + 1);
      if (mode == SweepMode::sim) {
        SimParams params = *spec.sim_params;
        params.seed = derive_seed(spec.sim_params->seed, g);
        const SimStats stats = run_simulation(cfg, params);
        for (std::size_t i = 0; i < k; ++i) {
          col.value[i] = stats.per_class[i].blocking;
          col.half_width[i] = stats.per_class[i].half_width;
        }
        col.value[k] = stats.overall;
        col.half_width[k] = stats.overall_half_width;
      } else {
        const SolveMode solve_mode = mode == SweepMode::ctmc        ? SolveMode::ctmc
                                     : mode == SweepMode::literal1d ? SolveMode::literal1d
                                                                    : SolveMode::recurrence;
        const BlockingReport report = solve(cfg, solve_mode);
        for (std::size_t i = 0; i < k; ++i) col.value[i] = report.per_class[i];
        col.value[k] = report.overall;
      }
      columns.push_back(std::move(col));
    }

    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t m = 0; m < modes.size(); ++m) {
        SweepRow row;
        row.lambda = spec.grid[g];
        if (i < k) row.class_index = i;
        row.mode = modes[m];
        row.blocking = columns[m].value[i];
        if (modes[m] == SweepMode::sim && row.blocking && columns[m].half_width[i]) {
          const double hw = *columns[m].half_width[i];
          row.ci_low = std::max(0.0, *row.blocking - hw);
          row.ci_high = std::min(1.0, *row.blocking + hw);
        }
        result.rows.push_back(row);
      }
    }
  }
  return result;
}

ComparisonReport compare_analytic_sim(const SystemConfig& cfg, const SimParams& sim_params) {
  ComparisonReport out;
  out.analytic = solve(cfg, SolveMode::ctmc);
  SimParams markovian = sim_params;
  markovian.service_model = MarkovianService{};
  out.simulated = run_simulation(cfg, markovian);
  out.degenerate = out.analytic.degenerate() || out.simulated.degenerate();

  std::size_t covered = 0;
  for (std::size_t i = 0; i < cfg.class_count(); ++i) {
    ClassComparison c;
    c.analytic = out.analytic.per_class[i];
    c.estimate = out.simulated.per_class[i].blocking;
    c.half_width = out.simulated.per_class[i].half_width;
    if (c.estimate) {
      c.deviation = std::abs(c.analytic - *c.estimate);
      out.max_deviation = std::max(out.max_deviation, *c.deviation);
      c.covered = *c.deviation <= c.half_width.value_or(0.0);
    }
    if (c.covered) ++covered;
    out.per_class.push_back(c);
  }
  out.coverage_fraction = cfg.class_count() ? static_cast<double>(covered) / static_cast<double>(cfg.class_count()) : 0.0;
  return out;
}

SystemConfig default_scenario() {
  SystemConfig cfg;
  cfg.capacity = 20;
  cfg.classes = {
      TrafficClassSpec{"voice", 1.0, 1.0, 1, 1},
      TrafficClassSpec{"web", 1.0, 1.0, 2, 3},
      TrafficClassSpec{"file", 1.0, 1.0, 3, 5},
  };
  return cfg;
}

}  // namespace cacperf
