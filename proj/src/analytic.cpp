#include "cacperf/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cacperf/errors.hpp"

namespace cacperf {

const char* to_string(SolveMode mode) {
  switch (mode) {
    case SolveMode::ctmc: return "ctmc";
    case SolveMode::literal1d: return "literal1d";
    case SolveMode::recurrence: return "recurrence";
    case SolveMode::kaufman_roberts: return "kaufman_roberts";
    case SolveMode::erlang_b: return "erlang_b";
  }
  return "unknown";
}

SolveMode parse_solve_mode(std::string_view token) {
  if (token == "ctmc") return SolveMode::ctmc;
  if (token == "literal1d") return SolveMode::literal1d;
  if (token == "recurrence") return SolveMode::recurrence;
  if (token == "kr" || token == "kaufman_roberts") return SolveMode::kaufman_roberts;
  if (token == "erlangb" || token == "erlang_b") return SolveMode::erlang_b;
  throw ModeError("unknown mode '" + std::string(token) + "'");
}

namespace {

void require_three_classes(const SystemConfig& cfg, const char* what) {
  if (cfg.class_count() != 3) {
    throw ModeError(std::string(what) + " requires exactly 3 traffic classes (got " +
                    std::to_string(cfg.class_count()) + ")");
  }
}

std::optional<double> weighted_overall(const std::vector<double>& per_class, const SystemConfig& cfg) {
  double offered = 0.0;
  double blocked = 0.0;
  for (std::size_t i = 0; i < per_class.size(); ++i) {
    offered += cfg.classes[i].arrival_rate;
    blocked += cfg.classes[i].arrival_rate * per_class[i];
  }
  if (offered <= 0.0) return std::nullopt;
  return blocked / offered;
}

}  // namespace

RateMatrix build_generator(const SystemConfig& cfg, const StateSpace& space) {
  if (space.class_count() != cfg.class_count()) {
    throw std::invalid_argument("build_generator: state space does not match configuration");
  }
  const std::size_t k = cfg.class_count();
  RateMatrix::Builder builder(space.size());
  SystemState neighbour;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const SystemState& state = space[s];
    const int free = cfg.capacity - space.occupied(s);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& c = cfg.classes[i];
      if (c.arrival_rate > 0.0 && admissible_with_free(free, i, cfg)) {
        neighbour = state;
        ++neighbour.occupancy[i];
        builder.add(s, *space.index_of(neighbour), c.arrival_rate);
      }
      if (state.occupancy[i] > 0) {
        neighbour = state;
        --neighbour.occupancy[i];
        builder.add(s, *space.index_of(neighbour), state.occupancy[i] * c.service_rate);
      }
    }
  }
  return std::move(builder).build();
}

RateMatrix build_literal_1d_generator(const SystemConfig& cfg) {
  require_three_classes(cfg, "literal1d mode");
  const int n_max = cfg.capacity;
  RateMatrix::Builder builder(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto row = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i < cfg.class_count(); ++i) {
      const auto& c = cfg.classes[i];
      if (admissible_with_free(n_max - n, i, cfg)) {
        builder.add(row, static_cast<std::size_t>(n + c.bandwidth), c.arrival_rate);
      }
      if (n >= c.bandwidth) {
        builder.add(row, static_cast<std::size_t>(n - c.bandwidth), c.service_rate);
      }
    }
  }
  return std::move(builder).build();
}

BlockingReport blocking_probabilities(std::span<const double> pi, const SystemConfig& cfg,
                                      const StateSpace& space) {
  if (pi.size() != space.size()) {
    throw std::invalid_argument("blocking_probabilities: distribution does not match state space");
  }
  BlockingReport report;
  report.mode = SolveMode::ctmc;
  report.per_class.assign(cfg.class_count(), 0.0);
  for (std::size_t s = 0; s < space.size(); ++s) {
    const int free = cfg.capacity - space.occupied(s);
    for (std::size_t i = 0; i < cfg.class_count(); ++i) {
      if (!admissible_with_free(free, i, cfg)) report.per_class[i] += pi[s];
    }
  }
  report.overall = weighted_overall(report.per_class, cfg);
  return report;
}

BlockingReport blocking_from_levels(std::span<const double> level_pi, const SystemConfig& cfg) {
  if (level_pi.size() != static_cast<std::size_t>(cfg.capacity) + 1) {
    throw std::invalid_argument("blocking_from_levels: expected capacity + 1 levels");
  }
  BlockingReport report;
  report.mode = SolveMode::literal1d;
  report.per_class.assign(cfg.class_count(), 0.0);
  for (std::size_t n = 0; n < level_pi.size(); ++n) {
    const int free = cfg.capacity - static_cast<int>(n);
    for (std::size_t i = 0; i < cfg.class_count(); ++i) {
      if (!admissible_with_free(free, i, cfg)) report.per_class[i] += level_pi[n];
    }
  }
  report.overall = weighted_overall(report.per_class, cfg);
  return report;
}

std::pair<RecurrenceResult, BlockingReport> level_recurrence(const SystemConfig& cfg,
                                                                  RecurrenceVariant variant) {
  require_three_classes(cfg, "recurrence mode");
  const auto& c = cfg.classes;
  const bool equal_rates = c[0].arrival_rate == c[1].arrival_rate && c[1].arrival_rate == c[2].arrival_rate &&
                           c[0].service_rate == c[1].service_rate && c[1].service_rate == c[2].service_rate;
  if (variant == RecurrenceVariant::equal_rate && !equal_rates) {
    throw ModeError("equal-rate recurrence requested but arrival or service rates differ across classes");
  }
  if (variant == RecurrenceVariant::automatic) {
    variant = equal_rates ? RecurrenceVariant::equal_rate : RecurrenceVariant::general;
  }

  RecurrenceResult result;
  result.variant = variant;
  const double mu_sum = c[0].service_rate + c[1].service_rate + c[2].service_rate;
  const double a = variant == RecurrenceVariant::equal_rate
                       ? c[0].arrival_rate / c[0].service_rate
                       : (c[0].arrival_rate + c[1].arrival_rate + c[2].arrival_rate) / mu_sum;
  result.load_ratio = a;

  const auto n = static_cast<std::size_t>(cfg.capacity);
  auto& p = result.unnormalized;
  p.assign(n + 1, 0.0);
  p[0] = 1.0;
  auto at = [&](std::ptrdiff_t k) { return k < 0 ? 0.0 : p[static_cast<std::size_t>(k)]; };
  for (std::size_t k = 1; k <= n; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    if (variant == RecurrenceVariant::equal_rate) {
      p[k] = a / 3.0 * (at(i - 1) + at(i - 2) + at(i - 3));
    } else {
      p[k] = (c[0].arrival_rate * at(i - 1) + c[1].arrival_rate * at(i - 2) + c[2].arrival_rate * at(i - 3)) /
             mu_sum;
    }
    if (!std::isfinite(p[k])) {
      throw SolverError("recurrence overflowed at level " + std::to_string(k) + "; reduce capacity or load");
    }
  }
  double total = 0.0;
  for (auto v : p) total += v;
  result.normalized = p;
  for (auto& v : result.normalized) v /= total;

  const auto& q = result.normalized;
  const auto top = static_cast<std::ptrdiff_t>(n);
  auto level = [&](std::ptrdiff_t k) { return k < 0 ? 0.0 : q[static_cast<std::size_t>(k)]; };

  BlockingReport report;
  report.mode = SolveMode::recurrence;
  report.per_class = {level(top), level(top - 1), level(top - 2)};
  if (variant == RecurrenceVariant::equal_rate) {
    report.variant = "equal_rate";
    report.overall = a / 3.0 * (level(top) + level(top - 1) + level(top - 2));
  } else {
    report.variant = "general";
    report.overall = (c[0].arrival_rate * level(top) + c[1].arrival_rate * level(top - 1) +
                      c[2].arrival_rate * level(top - 2)) /
                     mu_sum;
  }
  return {std::move(result), std::move(report)};
}

CtmcSolution solve_ctmc(const SystemConfig& cfg, const SolveOptions& options) {
  validate_config(cfg);
  CtmcSolution out;
  out.space = enumerate_states(cfg, options.state_limit);
  const RateMatrix q = build_generator(cfg, out.space);
  out.distribution = steady_state(q, options.steady_state);
  out.report = blocking_probabilities(out.distribution.probabilities, cfg, out.space);
  out.report.residual = out.distribution.residual;
  out.report.solver = out.distribution.method;
  return out;
}

std::vector<double> occupancy_levels(const CtmcSolution& solution, int capacity) {
  std::vector<double> levels(static_cast<std::size_t>(capacity) + 1, 0.0);
  for (std::size_t s = 0; s < solution.space.size(); ++s) {
    levels[static_cast<std::size_t>(solution.space.occupied(s))] += solution.distribution.probabilities[s];
  }
  return levels;
}

BlockingReport solve(const SystemConfig& cfg, SolveMode mode, const SolveOptions& options) {
  validate_config(cfg);
  switch (mode) {
    case SolveMode::ctmc:
      return solve_ctmc(cfg, options).report;

    case SolveMode::literal1d: {
      const RateMatrix q = build_literal_1d_generator(cfg);
      auto dist = steady_state(q, options.steady_state);
      auto report = blocking_from_levels(dist.probabilities, cfg);
      report.residual = dist.residual;
      report.solver = dist.method;
      return report;
    }

    case SolveMode::recurrence:
      return level_recurrence(cfg, options.recurrence).second;

    case SolveMode::kaufman_roberts: {
      std::vector<LoadClass> loads;
      for (const auto& c : cfg.classes) {
        if (c.admission_threshold != c.bandwidth) {
          throw ModeError("kaufman_roberts mode requires complete sharing (admission_threshold == bandwidth)");
        }
        loads.push_back(LoadClass{c.arrival_rate / c.service_rate, c.bandwidth});
      }
      auto kr = kaufman_roberts(cfg.capacity, loads);
      BlockingReport report;
      report.mode = SolveMode::kaufman_roberts;
      report.per_class = std::move(kr.blocking);
      report.overall = weighted_overall(report.per_class, cfg);
      return report;
    }

    case SolveMode::erlang_b: {
      if (cfg.class_count() != 1 || cfg.classes[0].bandwidth != 1 || cfg.classes[0].admission_threshold != 1) {
        throw ModeError("erlang_b mode requires a single class with bandwidth 1 and threshold 1");
      }
      const auto& c = cfg.classes[0];
      BlockingReport report;
      report.mode = SolveMode::erlang_b;
      report.per_class = {erlang_b(cfg.capacity, c.arrival_rate / c.service_rate)};
      report.overall = weighted_overall(report.per_class, cfg);
      return report;
    }
  }
  throw ModeError("unsupported mode");
}

}  // namespace cacperf
