#include <cmath>
#include <stdexcept>

#include "cacperf/analytic.hpp"

namespace cacperf {

double erlang_b(int capacity, double offered_load) {
  if (capacity < 0) throw std::invalid_argument("erlang_b: capacity must be >= 0");
  if (!(offered_load >= 0.0) || !std::isfinite(offered_load)) {
    throw std::invalid_argument("erlang_b: offered load must be finite and >= 0");
  }
  double b = 1.0;
  for (int k = 1; k <= capacity; ++k) b = offered_load * b / (k + offered_load * b);
  return b;
}

KaufmanRobertsResult kaufman_roberts(int capacity, std::span<const LoadClass> classes) {
  if (capacity < 0) throw std::invalid_argument("kaufman_roberts: capacity must be >= 0");
  for (const auto& c : classes) {
    if (c.bandwidth < 1) throw std::invalid_argument("kaufman_roberts: bandwidth must be >= 1");
    if (!(c.load >= 0.0) || !std::isfinite(c.load)) {
      throw std::invalid_argument("kaufman_roberts: load must be finite and >= 0");
    }
  }
  const auto n = static_cast<std::size_t>(capacity);
  std::vector<double> q(n + 1, 0.0);
  q[0] = 1.0;
  for (std::size_t j = 1; j <= n; ++j) {
    double acc = 0.0;
    for (const auto& c : classes) {
      const auto b = static_cast<std::size_t>(c.bandwidth);
      if (b <= j) acc += c.load * c.bandwidth * q[j - b];
    }
    q[j] = acc / static_cast<double>(j);
    if (q[j] > 1e250) {
      for (std::size_t k = 0; k <= j; ++k) q[k] *= 1e-250;
    }
  }
  double total = 0.0;
  for (auto v : q) total += v;
  for (auto& v : q) v /= total;

  KaufmanRobertsResult out;
  out.blocking.reserve(classes.size());
  for (const auto& c : classes) {
    double blocked = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      if (static_cast<int>(n - j) < c.bandwidth) blocked += q[j];
    }
    out.blocking.push_back(blocked);
  }
  out.occupancy = std::move(q);
  return out;
}

}  // namespace cacperf
