#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cacperf/model.hpp"
#include "cacperf/rate_matrix.hpp"
#include "cacperf/steady_state.hpp"

namespace cacperf {

enum class SolveMode { ctmc, literal1d, recurrence, kaufman_roberts, erlang_b };

/// Canonical report label ("ctmc", "literal1d", "recurrence",
/// "kaufman_roberts", "erlang_b").
const char* to_string(SolveMode mode);

/// Accepts the canonical labels and the short CLI tokens "kr", "erlangb".
/// Throws ModeError on anything else.
SolveMode parse_solve_mode(std::string_view token);

/// Blocking probabilities from one computation path.
struct BlockingReport {
  std::vector<double> per_class;
  /// Arrival-weighted overall blocking (set-based modes) or the raw
  /// recurrence value; absent when every arrival rate is zero.
  std::optional<double> overall;
  SolveMode mode = SolveMode::ctmc;
  /// Sub-path label, e.g. "general" / "equal_rate" for the recurrence.
  std::string variant;
  /// max |pi Q| for modes backed by a generator.
  std::optional<double> residual;
  std::optional<SolverMethod> solver;

  bool valid() const noexcept { return overall.has_value() && *overall >= 0.0 && *overall <= 1.0; }
  /// No traffic offered at all; per-class values are still meaningful.
  bool degenerate() const noexcept { return !overall.has_value(); }
};

/// Multi-class generator over `space`: class i arrives at rate lambda_i
/// into s + e_i when admissible, each call of class i leaves at mu_i.
RateMatrix build_generator(const SystemConfig& cfg, const StateSpace& space);

/// One-dimensional chain over total occupancy 0..N with constant
/// per-class departure rates. Requires exactly three classes.
RateMatrix build_literal_1d_generator(const SystemConfig& cfg);

/// Per-class stationary mass of the blocked-state sets, plus the
/// arrival-weighted overall value. Mode is ctmc.
BlockingReport blocking_probabilities(std::span<const double> pi, const SystemConfig& cfg,
                                      const StateSpace& space);

/// Same threshold-set summation over a distribution on occupancy levels
/// 0..N (literal1d).
BlockingReport blocking_from_levels(std::span<const double> level_pi, const SystemConfig& cfg);

/// Erlang-B via B_k = a B_{k-1} / (k + a B_{k-1}), B_0 = 1.
double erlang_b(int capacity, double offered_load);

struct LoadClass {
  double load = 0.0;  // Erlangs
  int bandwidth = 1;
};

struct KaufmanRobertsResult {
  std::vector<double> occupancy;  // normalized over 0..N
  std::vector<double> blocking;   // per class
};

/// Occupancy recursion j q(j) = sum_i a_i b_i q(j - b_i) for complete sharing.
KaufmanRobertsResult kaufman_roberts(int capacity, std::span<const LoadClass> classes);

enum class RecurrenceVariant { automatic, general, equal_rate };

struct RecurrenceResult {
  std::vector<double> unnormalized;  // P_0..P_N with P_0 = 1
  std::vector<double> normalized;
  double load_ratio = 0.0;           // a = lambda / mu (sum ratio for the general form)
  RecurrenceVariant variant = RecurrenceVariant::general;
};

/// Three-class level recurrence seeded with P_0 = 1 and zero below, then
/// normalized. Blocking is read off P_N, P_{N-1}, P_{N-2}; the overall
/// value is reported raw and may exceed one.
std::pair<RecurrenceResult, BlockingReport> level_recurrence(
    const SystemConfig& cfg, RecurrenceVariant variant = RecurrenceVariant::automatic);

struct SolveOptions {
  SteadyStateOptions steady_state;
  std::size_t state_limit = kDefaultStateLimit;
  RecurrenceVariant recurrence = RecurrenceVariant::automatic;
};

/// Validates `cfg` and dispatches to the requested mode.
BlockingReport solve(const SystemConfig& cfg, SolveMode mode, const SolveOptions& options = {});

/// Full ctmc pipeline returning the stationary vector too.
struct CtmcSolution {
  StateSpace space;
  SteadyStateDistribution distribution;
  BlockingReport report;
};
CtmcSolution solve_ctmc(const SystemConfig& cfg, const SolveOptions& options = {});

/// Stationary distribution of the number of occupied channels (0..N).
std::vector<double> occupancy_levels(const CtmcSolution& solution, int capacity);

}  // namespace cacperf
