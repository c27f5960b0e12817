#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cacperf/errors.hpp"
#include "cacperf/traffic.hpp"

using namespace cacperf;

namespace {

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Moments draw_moments(const DistributionSpec& spec, std::uint64_t seed, int n = 100000) {
  Rng rng(seed);
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_distribution(spec, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = (sq - n * mean * mean) / (n - 1);
  return {mean, std::sqrt(var / n)};
}

TrafficMixtureSpec three_poisson(double w1, double w2, double w3) {
  TrafficMixtureSpec mix;
  mix.components.push_back({PoissonProcess{RateFunction::constant(2.0)}, WeightSchedule::constant(w1), 0, "user_arrival"});
  mix.components.push_back({MmppParams{1.0, 4.0, 0.5, 0.5}, WeightSchedule::constant(w2), 1, "session_arrival"});
  mix.components.push_back({RenewalProcess{Weibull{0.7, 1.0}}, WeightSchedule::constant(w3), 2, "session_size"});
  return mix;
}

bool sorted_in_window(const std::vector<double>& t, double horizon) {
  if (!std::is_sorted(t.begin(), t.end())) return false;
  return std::all_of(t.begin(), t.end(), [&](double x) { return x >= 0.0 && x < horizon; });
}

}  // namespace

TEST_CASE("sample_distribution: degenerate draws") {
  Rng rng(1);
  CHECK(sample_distribution(Lognormal{0.0, 0.0}, rng) == 1.0);
  CHECK(sample_distribution(Constant{5.0}, rng) == 5.0);
}

TEST_CASE("sample_distribution: moments at 1e5 draws") {
  SUBCASE("weibull shape 1 is exponential with mean = scale") {
    const auto m = draw_moments(Weibull{1.0, 2.0}, 11);
    CHECK(std::abs(m.mean - 2.0) <= 3.0 * m.stderr_);
  }
  SUBCASE("exponential") {
    const auto m = draw_moments(Exponential{4.0}, 12);
    CHECK(std::abs(m.mean - 0.25) <= 3.0 * m.stderr_);
  }
  SUBCASE("lognormal") {
    const auto m = draw_moments(Lognormal{0.3, 0.5}, 13);
    CHECK(std::abs(m.mean - std::exp(0.3 + 0.125)) <= 3.0 * m.stderr_);
  }
  SUBCASE("weibull shape 2") {
    const auto m = draw_moments(Weibull{2.0, 1.5}, 14);
    CHECK(std::abs(m.mean - 1.5 * std::tgamma(1.5)) <= 3.0 * m.stderr_);
  }
}

TEST_CASE("sample_distribution: positivity") {
  Rng rng(5);
  const DistributionSpec specs[] = {Exponential{3.0}, Lognormal{-2.0, 2.0}, Weibull{0.4, 0.1},
                                    BiPareto{0.8, 1.6, 50.0, 0.5}, Constant{1e-6}};
  for (const auto& s : specs) {
    for (int i = 0; i < 20000; ++i) CHECK_UNARY(sample_distribution(s, rng) > 0.0);
  }
}

TEST_CASE("BiPareto: empirical tail matches the complementary CDF") {
  const BiPareto d{1.2, 2.1, 8.0, 1.0};
  CHECK(bipareto_ccdf(d, 1.0) == doctest::Approx(1.0));
  CHECK(bipareto_ccdf(d, 0.5) == 1.0);
  Rng rng(77);
  const int n = 100000;
  std::vector<double> xs(n);
  for (auto& x : xs) x = sample_distribution(d, rng);
  for (double q : {1.5, 3.0, 8.0, 20.0, 100.0}) {
    const double p = bipareto_ccdf(d, q);
    const double emp = static_cast<double>(std::count_if(xs.begin(), xs.end(), [&](double x) { return x > q; })) / n;
    CHECK(std::abs(emp - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
  }
  CHECK_FALSE(distribution_mean(d).has_value());
  CHECK(*distribution_mean(Weibull{1.0, 2.0}) == doctest::Approx(2.0));
}

TEST_CASE("distribution validation") {
  CHECK(distribution_violations(BiPareto{1.0, 1.0, 0.5, 1.0}).size() == 1);
  CHECK(distribution_violations(BiPareto{1.0, 1.0, 1.0, 1.0}).empty());
  CHECK_THROWS_AS(validate_distribution(Exponential{0.0}), ConfigError);
  CHECK_THROWS_AS(validate_distribution(Weibull{-1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate_distribution(Lognormal{0.0, -0.1}), ConfigError);
  Rng rng(1);
  CHECK_THROWS_AS(sample_distribution(Constant{0.0}, rng), ConfigError);
}

TEST_CASE("sample_poisson_process examples") {
  Rng rng(3);
  CHECK(sample_poisson_process(RateFunction::constant(0.0), 100.0, rng).empty());

  const auto events = sample_poisson_process(RateFunction::constant(2.0), 1e4, rng);
  CHECK(std::abs(static_cast<double>(events.size()) - 2e4) <= 3.0 * std::sqrt(2e4));
  CHECK(sorted_in_window(events, 1e4));

  RateFunction step{{RateSegment{0.0, 0.0}, RateSegment{5.0, 3.0}}};
  for (int rep = 0; rep < 50; ++rep) {
    const auto ev = sample_poisson_process(step, 10.0, rng);
    for (double t : ev) CHECK(t >= 5.0);
  }

  CHECK_THROWS(sample_poisson_process(RateFunction{}, 10.0, rng));
  CHECK_THROWS(sample_poisson_process(RateFunction::constant(1.0), 0.0, rng));
  CHECK_FALSE(rate_function_violations(RateFunction{{RateSegment{1.0, 1.0}}}).empty());
  CHECK_FALSE(rate_function_violations(RateFunction{{RateSegment{0.0, 1.0}, RateSegment{0.0, 2.0}}}).empty());
}

TEST_CASE("thinning gives the right per-segment counts") {
  Rng rng(2024);
  RateFunction f{{RateSegment{0.0, 1.0}, RateSegment{5000.0, 4.0}}};
  const auto ev = sample_poisson_process(f, 1e4, rng);
  const auto first = static_cast<double>(std::count_if(ev.begin(), ev.end(), [](double t) { return t < 5000.0; }));
  const auto second = static_cast<double>(ev.size()) - first;
  CHECK(std::abs(first - 5000.0) <= 3.0 * std::sqrt(5000.0));
  CHECK(std::abs(second - 20000.0) <= 3.0 * std::sqrt(20000.0));
}

TEST_CASE("sample_mmpp examples") {
  Rng rng(8);
  const auto flat = sample_mmpp(MmppParams{1.0, 1.0, 0.3, 2.0}, 1e4, rng);
  CHECK(std::abs(static_cast<double>(flat.size()) - 1e4) <= 3.0 * std::sqrt(1e4));
  CHECK(sorted_in_window(flat, 1e4));

  CHECK(sample_mmpp(MmppParams{0.0, 0.0, 1.0, 1.0}, 1e3, rng).empty());
  CHECK_THROWS(sample_mmpp(MmppParams{1.0, 1.0, 0.0, 1.0}, 10.0, rng));
  CHECK_THROWS(sample_mmpp(MmppParams{-1.0, 1.0, 1.0, 1.0}, 10.0, rng));
}

TEST_CASE("symmetric MMPP has long-run rate (r1 + r2) / 2") {
  // Batch the count over independent runs to get a standard error that
  // includes the modulation variance.
  const int runs = 200;
  const double horizon = 500.0;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(derive_seed(4242, static_cast<std::uint64_t>(r)));
    const double rate = static_cast<double>(sample_mmpp(MmppParams{1.0, 5.0, 0.2, 0.2}, horizon, rng).size()) / horizon;
    sum += rate;
    sq += rate * rate;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sq - runs * mean * mean) / (runs - 1) / runs);
  CHECK(std::abs(mean - 3.0) <= 3.0 * se);
}

TEST_CASE("renewal and population processes") {
  Rng rng(10);
  const auto ren = sample_renewal(Constant{0.5}, 10.0, rng);
  CHECK(ren.size() == 19);  // 0.5, 1.0, ..., 9.5
  CHECK(sorted_in_window(ren, 10.0));

  PopulationParams pop{10.0, UniformCount{3, 3}, 0.0};
  CHECK(sample_population(pop, 100.0, rng).empty());
  pop.per_user_rate = 0.5;
  const auto ev = sample_population(pop, 2e4, rng);
  CHECK(std::abs(static_cast<double>(ev.size()) - 3e4) <= 4.0 * std::sqrt(3e4));
  CHECK(sorted_in_window(ev, 2e4));
  CHECK_FALSE(population_violations(PopulationParams{0.0, UniformCount{1, 2}, 1.0}).empty());
  CHECK_FALSE(population_violations(PopulationParams{1.0, UniformCount{3, 2}, 1.0}).empty());
}

TEST_CASE("compose_traffic examples") {
  const double horizon = 200.0;
  SUBCASE("degenerate weights keep one component exactly") {
    const auto mix = three_poisson(1.0, 0.0, 0.0);
    const auto trace = compose_traffic(mix, horizon, 99);
    Rng rng(component_sample_seed(99, 0));
    const auto direct = sample_process(mix.components[0].process, horizon, rng);
    REQUIRE(trace.events.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      CHECK(trace.events[i].time == direct[i]);
      CHECK(trace.events[i].class_index == 0);
    }
    CHECK(trace.horizon == horizon);
  }
  SUBCASE("weights must sum to one") {
    TrafficMixtureSpec mix;
    mix.components.push_back({PoissonProcess{RateFunction::constant(1.0)}, WeightSchedule::constant(0.5), 0, ""});
    mix.components.push_back({PoissonProcess{RateFunction::constant(1.0)}, WeightSchedule::constant(0.6), 0, ""});
    try {
      compose_traffic(mix, horizon, 1);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("weights must sum to 1") != std::string::npos);
    }
  }
  SUBCASE("zero-rate components give an empty trace") {
    TrafficMixtureSpec mix;
    mix.components.push_back({PoissonProcess{RateFunction::constant(0.0)}, WeightSchedule::constant(0.3), 0, ""});
    mix.components.push_back({MmppParams{0.0, 0.0, 1.0, 1.0}, WeightSchedule::constant(0.7), 1, ""});
    CHECK(compose_traffic(mix, horizon, 5).events.empty());
  }
  SUBCASE("empty mixture is rejected") {
    CHECK_THROWS_AS(compose_traffic(TrafficMixtureSpec{}, horizon, 5), ConfigError);
  }
  SUBCASE("time-varying weights") {
    TrafficMixtureSpec mix;
    mix.components.push_back({PoissonProcess{RateFunction::constant(5.0)},
                              WeightSchedule{{WeightSegment{0.0, 1.0}, WeightSegment{100.0, 0.0}}}, 0, ""});
    mix.components.push_back({PoissonProcess{RateFunction::constant(5.0)},
                              WeightSchedule{{WeightSegment{0.0, 0.0}, WeightSegment{100.0, 1.0}}}, 1, ""});
    const auto trace = compose_traffic(mix, horizon, 17);
    CHECK_FALSE(trace.events.empty());
    for (const auto& e : trace.events) CHECK(e.class_index == (e.time < 100.0 ? 0u : 1u));
  }
}

TEST_CASE("compose_traffic is deterministic and well formed") {
  const auto mix = three_poisson(0.2, 0.5, 0.3);
  const auto a = compose_traffic(mix, 500.0, 123);
  const auto b = compose_traffic(mix, 500.0, 123);
  const auto c = compose_traffic(mix, 500.0, 124);
  CHECK(a.events == b.events);
  CHECK_FALSE(a.events == c.events);
  CHECK(std::is_sorted(a.events.begin(), a.events.end(),
                       [](const ArrivalEvent& x, const ArrivalEvent& y) { return x.time < y.time; }));
  for (const auto& e : a.events) {
    CHECK(e.time >= 0.0);
    CHECK(e.time < 500.0);
    CHECK(e.class_index < 3);
  }
}

TEST_CASE("write_trace_csv format") {
  ArrivalTrace trace{{ArrivalEvent{0.125, 0}, ArrivalEvent{1.0 / 3.0, 2}, ArrivalEvent{12345.678901234, 1}}, 20000.0};
  std::ostringstream out;
  write_trace_csv(trace, out);
  CHECK(out.str() == "time,class\n0.125,1\n0.333333333,3\n12345.6789,2\n");
}
