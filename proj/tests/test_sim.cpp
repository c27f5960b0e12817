#include <doctest.h>

#include <cmath>

#include "cacperf/analytic.hpp"
#include "cacperf/experiments.hpp"
#include "cacperf/sim.hpp"

using namespace cacperf;

namespace {

SystemConfig erlang(int n, double a) {
  SystemConfig cfg;
  cfg.capacity = n;
  cfg.classes = {TrafficClassSpec{"only", a, 1.0, 1, 1}};
  return cfg;
}

SimParams params(double horizon, std::size_t reps, std::uint64_t seed) {
  SimParams p;
  p.horizon = horizon;
  p.replications = reps;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("run_replication: no traffic") {
  auto cfg = default_scenario();
  for (auto& c : cfg.classes) c.arrival_rate = 0.0;
  const auto rep = run_replication(cfg, params(1000.0, 1, 4), 0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rep.offered[i] == 0);
    CHECK(rep.blocked[i] == 0);
  }
  const auto stats = run_simulation(cfg, params(1000.0, 3, 4));
  CHECK(stats.degenerate());
  for (const auto& c : stats.per_class) CHECK_FALSE(c.blocking.has_value());
  CHECK(stats.occupancy_histogram[0] == doctest::Approx(1.0));
}

TEST_CASE("run_replication: huge capacity blocks almost nothing") {
  const auto stats = run_simulation(erlang(10000, 1.0), params(2e4, 2, 9));
  CHECK(*stats.per_class[0].blocking <= 1e-3);
}

TEST_CASE("run_replication is deterministic per (seed, index)") {
  const auto cfg = default_scenario();
  const auto p = params(5000.0, 4, 77);
  const auto a = run_replication(cfg, p, 2);
  const auto b = run_replication(cfg, p, 2);
  const auto c = run_replication(cfg, p, 3);
  CHECK(a.offered == b.offered);
  CHECK(a.blocked == b.blocked);
  CHECK(a.occupancy_time == b.occupancy_time);
  CHECK(a.events == b.events);
  CHECK_FALSE(a.offered == c.offered);

  const auto s1 = run_simulation(cfg, p);
  const auto s2 = run_simulation(cfg, p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s1.per_class[i].blocking == s2.per_class[i].blocking);
    CHECK(s1.per_class[i].half_width == s2.per_class[i].half_width);
  }
  CHECK(s1.occupancy_histogram == s2.occupancy_histogram);
}

TEST_CASE("run_simulation: one replication has no half-width") {
  const auto stats = run_simulation(default_scenario(), params(2000.0, 1, 3));
  for (const auto& c : stats.per_class) {
    CHECK(c.blocking.has_value());
    CHECK_FALSE(c.half_width.has_value());
  }
  CHECK_FALSE(stats.overall_half_width.has_value());
}

TEST_CASE("run_simulation: Erlang N=2, a=1 interval covers 0.2") {
  const auto stats = run_simulation(erlang(2, 1.0), params(1e5, 10, 2026));
  const auto& c = stats.per_class[0];
  REQUIRE(c.half_width.has_value());
  CHECK(std::abs(*c.blocking - 0.2) <= *c.half_width);
  CHECK(*c.half_width < 0.01);
}

TEST_CASE("SimStats invariants") {
  const auto cfg = default_scenario();
  const auto stats = run_simulation(cfg, params(2e4, 5, 15));
  double total = 0.0;
  for (double h : stats.occupancy_histogram) {
    CHECK(h >= 0.0);
    total += h;
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);
  CHECK(stats.occupancy_histogram.size() == static_cast<std::size_t>(cfg.capacity) + 1);
  for (const auto& c : stats.per_class) {
    CHECK(c.blocked <= c.offered);
    CHECK(*c.blocking >= 0.0);
    CHECK(*c.blocking <= 1.0);
  }
  // thresholds nest the blocked sets, so the estimates keep their order here
  CHECK(*stats.per_class[0].blocking < *stats.per_class[2].blocking);
}

TEST_CASE("time-weighted occupancy converges to the ctmc occupancy law") {
  const auto cfg = default_scenario();
  const auto stats = run_simulation(cfg, params(1e6, 1, 31));
  const auto levels = occupancy_levels(solve_ctmc(cfg), cfg.capacity);
  double tvd = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) tvd += std::abs(levels[k] - stats.occupancy_histogram[k]);
  tvd *= 0.5;
  CHECK(tvd <= 0.02);
}

TEST_CASE("sim_params_violations") {
  CHECK(sim_params_violations(params(10.0, 1, 1)).empty());
  CHECK_FALSE(sim_params_violations(params(0.0, 1, 1)).empty());
  CHECK_FALSE(sim_params_violations(params(10.0, 0, 1)).empty());
  auto p = params(10.0, 1, 1);
  p.warmup = 10.0;
  CHECK_FALSE(sim_params_violations(p).empty());
  p.warmup = -1.0;
  CHECK_FALSE(sim_params_violations(p).empty());
  CHECK(params(50.0, 1, 1).effective_warmup() == doctest::Approx(5.0));
}

TEST_CASE("student_t_975") {
  CHECK(student_t_975(1) == doctest::Approx(12.7062047).epsilon(1e-8));
  CHECK(student_t_975(9) == doctest::Approx(2.26215716).epsilon(1e-8));
  CHECK_THROWS(student_t_975(0));
}

TEST_CASE("run_trace_driven examples") {
  const auto cfg = default_scenario();
  const std::vector<DistributionSpec> holding(3, Exponential{1.0});
  auto p = params(100.0, 1, 5);
  p.warmup = 0.0;

  const auto empty = run_trace_driven(cfg, ArrivalTrace{{}, 100.0}, holding, p);
  for (const auto& c : empty.per_class) CHECK(c.offered == 0);

  const auto one = run_trace_driven(cfg, ArrivalTrace{{ArrivalEvent{3.0, 1}}, 100.0}, holding, p);
  CHECK(one.per_class[1].offered == 1);
  CHECK(one.per_class[1].blocked == 0);
  CHECK(*one.per_class[1].blocking == 0.0);

  ArrivalTrace unsorted{{ArrivalEvent{3.0, 0}, ArrivalEvent{2.0, 0}}, 10.0};
  CHECK_THROWS(run_trace_driven(cfg, unsorted, holding, p));
  ArrivalTrace bad_class{{ArrivalEvent{1.0, 7}}, 10.0};
  CHECK_THROWS(run_trace_driven(cfg, bad_class, holding, p));
  CHECK_THROWS(run_trace_driven(cfg, ArrivalTrace{}, {Exponential{1.0}}, p));
}

TEST_CASE("trace-driven mode with Poisson arrivals agrees with markovian mode") {
  const auto cfg = default_scenario();
  TrafficMixtureSpec mix;
  for (std::size_t i = 0; i < 3; ++i) {
    // weight 1/3 on rate 3 lambda keeps each class at rate lambda
    mix.components.push_back({PoissonProcess{RateFunction::constant(3.0 * cfg.classes[i].arrival_rate)},
                              WeightSchedule::constant(1.0 / 3.0), i, "session_arrival"});
  }
  const double horizon = 2e5;
  const auto trace = compose_traffic(mix, horizon, 404);
  std::vector<DistributionSpec> holding;
  for (const auto& c : cfg.classes) holding.push_back(Exponential{c.service_rate});

  const auto traced = run_trace_driven(cfg, trace, holding, params(horizon, 10, 405));
  const auto markov = run_simulation(cfg, params(horizon / 10, 10, 406));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& t = traced.per_class[i];
    const auto& m = markov.per_class[i];
    CHECK(std::abs(*t.blocking - *m.blocking) <= *t.half_width + *m.half_width);
  }
}
