#pragma once

#include <cstdint>
#include <random>

namespace cacperf {

using Rng = std::mt19937_64;

/// SplitMix64 step; the usual way to expand one seed into many.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` derived from `master`. Streams are independent
/// in practice and fully reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ splitmix64(index);
  return splitmix64(state);
}

/// Uniform draw strictly inside (0, 1), built from the top 53 bits so the
/// value sequence is identical on every platform.
inline double uniform_open01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace cacperf
