#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cacperf/random.hpp"

namespace cacperf {

// ---- Distributions ---------------------------------------------------------

struct Exponential {
  double rate = 1.0;
};
struct Lognormal {
  double log_mean = 0.0;
  double log_stdev = 1.0;  // zero gives the constant exp(log_mean)
};
struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};
/// Two power-law regimes: exponent `alpha` near `minimum`, `beta` in the
/// tail, joined around `breakpoint`. CCDF for x >= minimum:
///   (x / k)^-alpha * ((x + c) / (k + c))^(alpha - beta)
struct BiPareto {
  double alpha = 1.0;
  double beta = 1.0;
  double breakpoint = 1.0;  // c
  double minimum = 1.0;     // k
};
struct Constant {
  double value = 1.0;
};

using DistributionSpec = std::variant<Exponential, Lognormal, Weibull, BiPareto, Constant>;

/// Empty when the parameters are valid; otherwise one message per problem.
std::vector<std::string> distribution_violations(const DistributionSpec& spec);
void validate_distribution(const DistributionSpec& spec);

const char* distribution_name(const DistributionSpec& spec);

/// One draw. Throws ConfigError on invalid parameters.
double sample_distribution(const DistributionSpec& spec, Rng& rng);

/// Analytic mean where it has a closed form (not BiPareto).
std::optional<double> distribution_mean(const DistributionSpec& spec);

double bipareto_ccdf(const BiPareto& d, double x);

// ---- Point processes -------------------------------------------------------

struct RateSegment {
  double start = 0.0;
  double rate = 0.0;
};

/// Piecewise-constant rate; the last segment extends to the horizon.
struct RateFunction {
  std::vector<RateSegment> segments;

  static RateFunction constant(double rate) { return RateFunction{{RateSegment{0.0, rate}}}; }
  double at(double t) const;
  double max_rate() const;
};

std::vector<std::string> rate_function_violations(const RateFunction& f);

struct MmppParams {
  double rate_state1 = 0.0;
  double rate_state2 = 0.0;
  double switch_12 = 1.0;
  double switch_21 = 1.0;
};

std::vector<std::string> mmpp_violations(const MmppParams& p);

/// Time-varying Poisson process by thinning a homogeneous process at the
/// maximum segment rate. Times are sorted and lie in [0, horizon).
std::vector<double> sample_poisson_process(const RateFunction& rate, double horizon, Rng& rng);

/// Two-state MMPP started from the modulator's stationary law.
std::vector<double> sample_mmpp(const MmppParams& params, double horizon, Rng& rng);

/// Renewal process with i.i.d. interarrival times.
std::vector<double> sample_renewal(const DistributionSpec& interarrival, double horizon, Rng& rng);

struct UniformCount {
  int low = 0;
  int high = 0;
};
using UserCountSpec = std::variant<UniformCount, Lognormal>;

/// User-population process: each epoch draws a user count, and every user
/// starts sessions as a Poisson stream of `per_user_rate`.
struct PopulationParams {
  double epoch = 1.0;
  UserCountSpec user_count = UniformCount{};
  double per_user_rate = 0.0;
};

std::vector<std::string> population_violations(const PopulationParams& p);

std::vector<double> sample_population(const PopulationParams& params, double horizon, Rng& rng);

struct PoissonProcess {
  RateFunction rate;
};
struct RenewalProcess {
  DistributionSpec interarrival;
};
using ProcessSpec = std::variant<PoissonProcess, MmppParams, RenewalProcess, PopulationParams>;

const char* process_name(const ProcessSpec& spec);

std::vector<double> sample_process(const ProcessSpec& spec, double horizon, Rng& rng);

// ---- Mixture ---------------------------------------------------------------

struct WeightSegment {
  double start = 0.0;
  double weight = 1.0;
};

/// Piecewise-constant mixture weight p_i(t).
struct WeightSchedule {
  std::vector<WeightSegment> segments{WeightSegment{}};

  static WeightSchedule constant(double w) { return WeightSchedule{{WeightSegment{0.0, w}}}; }
  double at(double t) const;
};

/// One term p_i(t) f_i(t) of the traffic mixture. Events of the process
/// are labelled with `class_index` (0-based).
struct TrafficComponent {
  ProcessSpec process;
  WeightSchedule weight;
  std::size_t class_index = 0;
  std::string role;  // free label: user_arrival, session_arrival, ...
};

struct TrafficMixtureSpec {
  std::vector<TrafficComponent> components;
};

/// Problems with the mixture, including the weight-sum rule checked at
/// every breakpoint of every schedule.
std::vector<std::string> mixture_violations(const TrafficMixtureSpec& mix);

struct ArrivalEvent {
  double time = 0.0;
  std::size_t class_index = 0;

  bool operator==(const ArrivalEvent&) const = default;
};

struct ArrivalTrace {
  std::vector<ArrivalEvent> events;
  double horizon = 0.0;
};

inline constexpr double kWeightSumTolerance = 1e-12;

/// Generator seeds used by compose_traffic for component `i`: one stream
/// samples the process, a second one drives the weight thinning.
std::uint64_t component_sample_seed(std::uint64_t seed, std::size_t i);
std::uint64_t component_thinning_seed(std::uint64_t seed, std::size_t i);

/// Samples every component independently, keeps each event with
/// probability p_i(t), and merges into one trace ordered by (time,
/// component). Throws ConfigError on an invalid mixture.
ArrivalTrace compose_traffic(const TrafficMixtureSpec& mix, double horizon, std::uint64_t seed);

/// CSV with header `time,class`; class labels are 1-based, times carry
/// 9 significant digits.
void write_trace_csv(const ArrivalTrace& trace, std::ostream& out);

}  // namespace cacperf
