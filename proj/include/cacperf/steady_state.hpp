#pragma once

#include <cstddef>
#include <vector>

#include "cacperf/rate_matrix.hpp"

namespace cacperf {

enum class SolverMethod { gth, gauss_seidel };

const char* to_string(SolverMethod m);

struct SteadyStateOptions {
  /// Reachable state count up to which GTH elimination is used.
  std::size_t gth_state_ceiling = 50'000;
  /// GTH works on the band of the reordered generator; larger bands than
  /// this many stored entries go to the iterative sweep instead.
  std::size_t gth_band_entry_limit = 40'000'000;
  double relative_change_tolerance = 1e-12;
  std::size_t max_iterations = 200'000;
  /// State the chain starts from; the solution lives on its reachable set.
  std::size_t start_state = 0;
};

/// Stationary vector of a generator, aligned with the generator's indices.
struct SteadyStateDistribution {
  std::vector<double> probabilities;
  double residual = 0.0;          // max_j |(pi Q)_j|
  SolverMethod method = SolverMethod::gth;
  std::size_t reachable_states = 0;
  std::size_t iterations = 0;     // sweeps used by the iterative path

  /// Some states are unreachable from the start state and carry zero mass.
  bool restricted() const noexcept { return reachable_states < probabilities.size(); }
};

/// Solves pi Q = 0, sum(pi) = 1 on the set of states reachable from
/// `options.start_state`. Throws SolverError when that set is not a single
/// communicating class or the iterative sweep does not converge.
SteadyStateDistribution steady_state(const RateMatrix& q, const SteadyStateOptions& options = {});

}  // namespace cacperf
