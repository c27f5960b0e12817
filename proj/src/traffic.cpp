#include "cacperf/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "cacperf/errors.hpp"
#include "cacperf/format.hpp"

namespace cacperf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

double draw_exponential(double rate, Rng& rng) { return -std::log(uniform_open01(rng)) / rate; }

double draw_normal(double mean, double stdev, Rng& rng) {
  if (stdev == 0.0) return mean;
  std::normal_distribution<double> normal(mean, stdev);
  return normal(rng);
}

void throw_if(std::vector<std::string> v) {
  if (!v.empty()) throw ConfigError(std::move(v));
}

// Inverts the BiPareto CCDF by bisection on log(x).
double sample_bipareto(const BiPareto& d, Rng& rng) {
  const double u = uniform_open01(rng);
  double lo = std::log(d.minimum);
  double hi = lo + 1.0;
  while (bipareto_ccdf(d, std::exp(hi)) > u) {
    hi = lo + 2.0 * (hi - lo);
    if (hi > 700.0) return std::exp(700.0);
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (bipareto_ccdf(d, std::exp(mid)) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

std::vector<std::string> distribution_violations(const DistributionSpec& spec) {
  std::vector<std::string> v;
  std::visit(overloaded{
                 [&](const Exponential& d) {
                   if (!positive(d.rate)) v.push_back("exponential.rate must be > 0");
                 },
                 [&](const Lognormal& d) {
                   if (!std::isfinite(d.log_mean)) v.push_back("lognormal.log_mean must be finite");
                   if (!non_negative(d.log_stdev)) v.push_back("lognormal.log_stdev must be >= 0");
                 },
                 [&](const Weibull& d) {
                   if (!positive(d.shape)) v.push_back("weibull.shape must be > 0");
                   if (!positive(d.scale)) v.push_back("weibull.scale must be > 0");
                 },
                 [&](const BiPareto& d) {
                   if (!positive(d.alpha)) v.push_back("bipareto.alpha must be > 0");
                   if (!positive(d.beta)) v.push_back("bipareto.beta must be > 0");
                   if (!positive(d.breakpoint)) v.push_back("bipareto.breakpoint must be > 0");
                   if (!positive(d.minimum)) v.push_back("bipareto.minimum must be > 0");
                   if (positive(d.breakpoint) && positive(d.minimum) && d.breakpoint < d.minimum) {
                     v.push_back("bipareto.breakpoint must be >= minimum");
                   }
                 },
                 [&](const Constant& d) {
                   if (!positive(d.value)) v.push_back("constant.value must be > 0");
                 },
             },
             spec);
  return v;
}

void validate_distribution(const DistributionSpec& spec) { throw_if(distribution_violations(spec)); }

const char* distribution_name(const DistributionSpec& spec) {
  static constexpr const char* names[] = {"exponential", "lognormal", "weibull", "bipareto", "constant"};
  return names[spec.index()];
}

double bipareto_ccdf(const BiPareto& d, double x) {
  if (x <= d.minimum) return 1.0;
  return std::pow(x / d.minimum, -d.alpha) *
         std::pow((x + d.breakpoint) / (d.minimum + d.breakpoint), d.alpha - d.beta);
}

double sample_distribution(const DistributionSpec& spec, Rng& rng) {
  validate_distribution(spec);
  return std::visit(overloaded{
                        [&](const Exponential& d) { return draw_exponential(d.rate, rng); },
                        [&](const Lognormal& d) { return std::exp(draw_normal(d.log_mean, d.log_stdev, rng)); },
                        [&](const Weibull& d) {
                          return d.scale * std::pow(-std::log(uniform_open01(rng)), 1.0 / d.shape);
                        },
                        [&](const BiPareto& d) { return sample_bipareto(d, rng); },
                        [&](const Constant& d) { return d.value; },
                    },
                    spec);
}

std::optional<double> distribution_mean(const DistributionSpec& spec) {
  return std::visit(overloaded{
                        [](const Exponential& d) -> std::optional<double> { return 1.0 / d.rate; },
                        [](const Lognormal& d) -> std::optional<double> {
                          return std::exp(d.log_mean + 0.5 * d.log_stdev * d.log_stdev);
                        },
                        [](const Weibull& d) -> std::optional<double> {
                          return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
                        },
                        [](const BiPareto&) -> std::optional<double> { return std::nullopt; },
                        [](const Constant& d) -> std::optional<double> { return d.value; },
                    },
                    spec);
}

double RateFunction::at(double t) const {
  double r = 0.0;
  for (const auto& s : segments) {
    if (s.start > t) break;
    r = s.rate;
  }
  return r;
}

double RateFunction::max_rate() const {
  double r = 0.0;
  for (const auto& s : segments) r = std::max(r, s.rate);
  return r;
}

std::vector<std::string> rate_function_violations(const RateFunction& f) {
  std::vector<std::string> v;
  if (f.segments.empty()) {
    v.push_back("rate function has no segments");
    return v;
  }
  if (f.segments.front().start != 0.0) v.push_back("rate function must start at time 0");
  for (std::size_t i = 0; i < f.segments.size(); ++i) {
    if (!non_negative(f.segments[i].rate)) v.push_back("rate function segment rates must be >= 0");
    if (i > 0 && !(f.segments[i].start > f.segments[i - 1].start)) {
      v.push_back("rate function segment starts must be strictly increasing");
    }
  }
  return v;
}

std::vector<std::string> mmpp_violations(const MmppParams& p) {
  std::vector<std::string> v;
  if (!non_negative(p.rate_state1)) v.push_back("mmpp.rate_state1 must be >= 0");
  if (!non_negative(p.rate_state2)) v.push_back("mmpp.rate_state2 must be >= 0");
  if (!positive(p.switch_12)) v.push_back("mmpp.switch_12 must be > 0");
  if (!positive(p.switch_21)) v.push_back("mmpp.switch_21 must be > 0");
  return v;
}

std::vector<std::string> population_violations(const PopulationParams& p) {
  std::vector<std::string> v;
  if (!positive(p.epoch)) v.push_back("population.epoch must be > 0");
  if (!non_negative(p.per_user_rate)) v.push_back("population.per_user_rate must be >= 0");
  if (const auto* u = std::get_if<UniformCount>(&p.user_count)) {
    if (u->low < 0 || u->high < u->low) v.push_back("population.user_count needs 0 <= low <= high");
  } else {
    auto more = distribution_violations(std::get<Lognormal>(p.user_count));
    v.insert(v.end(), more.begin(), more.end());
  }
  return v;
}

std::vector<double> sample_poisson_process(const RateFunction& rate, double horizon, Rng& rng) {
  throw_if(rate_function_violations(rate));
  if (!positive(horizon)) throw std::invalid_argument("horizon must be > 0");
  std::vector<double> times;
  const double peak = rate.max_rate();
  if (peak <= 0.0) return times;
  double t = 0.0;
  while (true) {
    t += draw_exponential(peak, rng);
    if (t >= horizon) break;
    if (uniform_open01(rng) * peak < rate.at(t)) times.push_back(t);
  }
  return times;
}

std::vector<double> sample_mmpp(const MmppParams& params, double horizon, Rng& rng) {
  throw_if(mmpp_violations(params));
  if (!positive(horizon)) throw std::invalid_argument("horizon must be > 0");
  std::vector<double> times;
  const double p_state1 = params.switch_21 / (params.switch_12 + params.switch_21);
  bool in_state1 = uniform_open01(rng) < p_state1;
  double t = 0.0;
  while (t < horizon) {
    const double leave = in_state1 ? params.switch_12 : params.switch_21;
    const double rate = in_state1 ? params.rate_state1 : params.rate_state2;
    const double end = std::min(horizon, t + draw_exponential(leave, rng));
    if (rate > 0.0) {
      double e = t;
      while (true) {
        e += draw_exponential(rate, rng);
        if (e >= end) break;
        times.push_back(e);
      }
    }
    t = end;
    in_state1 = !in_state1;
  }
  return times;
}

std::vector<double> sample_renewal(const DistributionSpec& interarrival, double horizon, Rng& rng) {
  validate_distribution(interarrival);
  if (!positive(horizon)) throw std::invalid_argument("horizon must be > 0");
  std::vector<double> times;
  double t = 0.0;
  while (true) {
    t += sample_distribution(interarrival, rng);
    if (t >= horizon) break;
    times.push_back(t);
  }
  return times;
}

std::vector<double> sample_population(const PopulationParams& params, double horizon, Rng& rng) {
  throw_if(population_violations(params));
  if (!positive(horizon)) throw std::invalid_argument("horizon must be > 0");
  std::vector<double> times;
  for (double start = 0.0; start < horizon; start += params.epoch) {
    const double end = std::min(horizon, start + params.epoch);
    double users = 0.0;
    if (const auto* u = std::get_if<UniformCount>(&params.user_count)) {
      std::uniform_int_distribution<int> count(u->low, u->high);
      users = count(rng);
    } else {
      users = std::round(sample_distribution(std::get<Lognormal>(params.user_count), rng));
    }
    const double rate = users * params.per_user_rate;
    if (rate <= 0.0) continue;
    double t = start;
    while (true) {
      t += draw_exponential(rate, rng);
      if (t >= end) break;
      times.push_back(t);
    }
  }
  return times;
}

const char* process_name(const ProcessSpec& spec) {
  static constexpr const char* names[] = {"poisson", "mmpp", "renewal", "population"};
  return names[spec.index()];
}

std::vector<double> sample_process(const ProcessSpec& spec, double horizon, Rng& rng) {
  return std::visit(overloaded{
                        [&](const PoissonProcess& p) { return sample_poisson_process(p.rate, horizon, rng); },
                        [&](const MmppParams& p) { return sample_mmpp(p, horizon, rng); },
                        [&](const RenewalProcess& p) { return sample_renewal(p.interarrival, horizon, rng); },
                        [&](const PopulationParams& p) { return sample_population(p, horizon, rng); },
                    },
                    spec);
}

double WeightSchedule::at(double t) const {
  double w = 0.0;
  for (const auto& s : segments) {
    if (s.start > t) break;
    w = s.weight;
  }
  return w;
}

std::vector<std::string> mixture_violations(const TrafficMixtureSpec& mix) {
  std::vector<std::string> v;
  if (mix.components.empty()) {
    v.push_back("traffic mixture has no components");
    return v;
  }
  std::set<double> breakpoints;
  for (std::size_t i = 0; i < mix.components.size(); ++i) {
    const auto& c = mix.components[i];
    const std::string where = "components[" + std::to_string(i) + "]: ";
    std::vector<std::string> inner = std::visit(
        overloaded{
            [](const PoissonProcess& p) { return rate_function_violations(p.rate); },
            [](const MmppParams& p) { return mmpp_violations(p); },
            [](const RenewalProcess& p) { return distribution_violations(p.interarrival); },
            [](const PopulationParams& p) { return population_violations(p); },
        },
        c.process);
    for (auto& m : inner) v.push_back(where + m);
    const auto& segs = c.weight.segments;
    if (segs.empty() || segs.front().start != 0.0) v.push_back(where + "weight schedule must start at time 0");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      if (!(segs[k].weight >= 0.0 && segs[k].weight <= 1.0)) v.push_back(where + "weights must lie in [0, 1]");
      if (k > 0 && !(segs[k].start > segs[k - 1].start)) {
        v.push_back(where + "weight segment starts must be strictly increasing");
      }
      breakpoints.insert(segs[k].start);
    }
  }
  for (double t : breakpoints) {
    double total = 0.0;
    for (const auto& c : mix.components) total += c.weight.at(t);
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
      v.push_back("weights must sum to 1 (sum is " + format_significant(total, 12) + " at t=" +
                  format_significant(t, 9) + ")");
    }
  }
  return v;
}

std::uint64_t component_sample_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, 2 * i); }

std::uint64_t component_thinning_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, 2 * i + 1); }

ArrivalTrace compose_traffic(const TrafficMixtureSpec& mix, double horizon, std::uint64_t seed) {
  throw_if(mixture_violations(mix));
  if (!positive(horizon)) throw std::invalid_argument("horizon must be > 0");
  ArrivalTrace trace;
  trace.horizon = horizon;
  struct Tagged {
    double time;
    std::size_t component;
    std::size_t class_index;
  };
  std::vector<Tagged> merged;
  for (std::size_t i = 0; i < mix.components.size(); ++i) {
    const auto& c = mix.components[i];
    Rng sampler(component_sample_seed(seed, i));
    Rng thinner(component_thinning_seed(seed, i));
    for (double t : sample_process(c.process, horizon, sampler)) {
      if (uniform_open01(thinner) < c.weight.at(t)) merged.push_back(Tagged{t, i, c.class_index});
    }
  }
  std::stable_sort(merged.begin(), merged.end(), [](const Tagged& a, const Tagged& b) {
    return a.time < b.time || (a.time == b.time && a.component < b.component);
  });
  trace.events.reserve(merged.size());
  for (const auto& e : merged) trace.events.push_back(ArrivalEvent{e.time, e.class_index});
  return trace;
}

void write_trace_csv(const ArrivalTrace& trace, std::ostream& out) {
  out << "time,class\n";
  for (const auto& e : trace.events) out << format_significant(e.time, 9) << ',' << (e.class_index + 1) << '\n';
}

}  // namespace cacperf
