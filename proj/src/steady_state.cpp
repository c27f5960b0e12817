#include "cacperf/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "cacperf/errors.hpp"

namespace cacperf {

const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::gth: return "gth";
    case SolverMethod::gauss_seidel: return "gauss_seidel";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Compact view of the generator restricted to the reachable set. Local
// indices preserve the original order, so bandwidth never grows.
struct SubChain {
  std::vector<std::size_t> global;                      // local -> global
  std::vector<std::vector<RateMatrix::Entry>> rows;     // local columns
  std::size_t lower = 0;                                // max(i - j)
  std::size_t upper = 0;                                // max(j - i)
};

SubChain reachable_subchain(const RateMatrix& q, std::size_t start) {
  const std::size_t n = q.dimension();
  std::vector<char> seen(n, 0);
  std::deque<std::size_t> frontier{start};
  seen[start] = 1;
  while (!frontier.empty()) {
    auto i = frontier.front();
    frontier.pop_front();
    for (const auto& e : q.row(i)) {
      if (!seen[e.col]) {
        seen[e.col] = 1;
        frontier.push_back(e.col);
      }
    }
  }
  SubChain sub;
  std::vector<std::size_t> local(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) {
      local[i] = sub.global.size();
      sub.global.push_back(i);
    }
  }
  sub.rows.resize(sub.global.size());
  for (std::size_t li = 0; li < sub.global.size(); ++li) {
    for (const auto& e : q.row(sub.global[li])) {
      const std::size_t lj = local[e.col];
      sub.rows[li].push_back(RateMatrix::Entry{lj, e.rate});
      if (lj < li) sub.lower = std::max(sub.lower, li - lj);
      if (lj > li) sub.upper = std::max(sub.upper, lj - li);
    }
  }
  return sub;
}

void require_irreducible(const SubChain& sub, std::size_t start_local) {
  const std::size_t m = sub.rows.size();
  std::vector<std::vector<std::size_t>> incoming(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : sub.rows[i]) incoming[e.col].push_back(i);
  }
  std::vector<char> seen(m, 0);
  std::deque<std::size_t> frontier{start_local};
  seen[start_local] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    auto j = frontier.front();
    frontier.pop_front();
    for (auto i : incoming[j]) {
      if (!seen[i]) {
        seen[i] = 1;
        ++count;
        frontier.push_back(i);
      }
    }
  }
  if (count != m) {
    throw SolverError("degenerate generator: " + std::to_string(m - count) +
                      " reachable states cannot return to the start state");
  }
}

// Grassmann-Taksar-Heyman elimination on band storage. Eliminating states
// from last to first keeps all fill-in inside the original band.
std::vector<double> solve_gth(const SubChain& sub) {
  const std::size_t m = sub.rows.size();
  const std::size_t kl = sub.lower;
  const std::size_t ku = sub.upper;
  const std::size_t width = kl + ku + 1;
  std::vector<double> band(m * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return band[i * width + (j + kl - i)]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : sub.rows[i]) at(i, e.col) = e.rate;
  }

  for (std::size_t k = m - 1; k >= 1; --k) {
    const std::size_t jlo = k > kl ? k - kl : 0;
    const std::size_t ilo = k > ku ? k - ku : 0;
    double out = 0.0;
    for (std::size_t j = jlo; j < k; ++j) out += at(k, j);
    if (!(out > 0.0)) {
      throw SolverError("GTH elimination hit a state with no path to lower states");
    }
    for (std::size_t i = ilo; i < k; ++i) {
      double& aik = at(i, k);
      if (aik == 0.0) continue;
      aik /= out;
      const double f = aik;
      double* row_i = &band[i * width];
      const double* row_k = &band[k * width];
      for (std::size_t j = jlo; j < k; ++j) {
        if (j == i) continue;
        row_i[j + kl - i] += f * row_k[j + kl - k];
      }
    }
  }

  std::vector<double> pi(m, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t ilo = k > ku ? k - ku : 0;
    double v = 0.0;
    for (std::size_t i = ilo; i < k; ++i) v += pi[i] * at(i, k);
    pi[k] = v;
    total += v;
  }
  for (auto& p : pi) p /= total;
  return pi;
}

std::vector<double> solve_gauss_seidel(const SubChain& sub, const SteadyStateOptions& options,
                                       std::size_t& iterations) {
  const std::size_t m = sub.rows.size();
  std::vector<std::vector<RateMatrix::Entry>> incoming(m);
  std::vector<double> outflow(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& e : sub.rows[i]) {
      incoming[e.col].push_back(RateMatrix::Entry{i, e.rate});
      outflow[i] += e.rate;
    }
  }
  std::vector<double> pi(m, 1.0 / static_cast<double>(m));
  std::vector<double> previous(m);
  for (iterations = 1; iterations <= options.max_iterations; ++iterations) {
    previous = pi;
    for (std::size_t j = 0; j < m; ++j) {
      double in = 0.0;
      for (const auto& e : incoming[j]) in += pi[e.col] * e.rate;
      pi[j] = in / outflow[j];
    }
    double total = 0.0;
    for (auto p : pi) total += p;
    double change = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      pi[j] /= total;
      change += std::abs(pi[j] - previous[j]);
    }
    if (change <= options.relative_change_tolerance) return pi;
  }
  throw SolverError("iterative steady-state sweep did not converge in " +
                    std::to_string(options.max_iterations) + " iterations");
}

}  // namespace

SteadyStateDistribution steady_state(const RateMatrix& q, const SteadyStateOptions& options) {
  const std::size_t n = q.dimension();
  if (n == 0) throw std::invalid_argument("steady_state: empty generator");
  if (options.start_state >= n) throw std::invalid_argument("steady_state: start state out of range");

  SubChain sub = reachable_subchain(q, options.start_state);
  const std::size_t m = sub.global.size();
  const std::size_t start_local =
      static_cast<std::size_t>(std::lower_bound(sub.global.begin(), sub.global.end(), options.start_state) -
                               sub.global.begin());

  SteadyStateDistribution result;
  result.reachable_states = m;
  result.probabilities.assign(n, 0.0);

  std::vector<double> local;
  if (m == 1) {
    local = {1.0};
  } else {
    require_irreducible(sub, start_local);
    const std::size_t band_entries = m * (sub.lower + sub.upper + 1);
    if (m <= options.gth_state_ceiling && band_entries <= options.gth_band_entry_limit) {
      local = solve_gth(sub);
      result.method = SolverMethod::gth;
    } else {
      local = solve_gauss_seidel(sub, options, result.iterations);
      result.method = SolverMethod::gauss_seidel;
    }
  }
  for (std::size_t li = 0; li < m; ++li) result.probabilities[sub.global[li]] = local[li];

  auto flow = q.left_multiply(result.probabilities);
  for (auto v : flow) result.residual = std::max(result.residual, std::abs(v));
  return result;
}

}  // namespace cacperf
