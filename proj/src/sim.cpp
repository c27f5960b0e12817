#include "cacperf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "cacperf/errors.hpp"
#include "cacperf/random.hpp"

namespace cacperf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Departure {
  double time;
  std::uint64_t seq;
  std::size_t class_index;
};

struct LaterFirst {
  bool operator()(const Departure& a, const Departure& b) const {
    return a.time > b.time || (a.time == b.time && a.seq > b.seq);
  }
};

// Observation window [start, end) cut into equal batches.
class Window {
 public:
  Window(double start, double end, std::size_t batches, std::size_t class_count, std::size_t levels)
      : start_(start), end_(end), batches_(batches), length_((end - start) / static_cast<double>(batches)) {
    stats_.resize(batches);
    for (std::size_t b = 0; b < batches; ++b) {
      auto& s = stats_[b];
      s.offered.assign(class_count, 0);
      s.blocked.assign(class_count, 0);
      s.occupancy_time.assign(levels, 0.0);
      s.observed_time = b + 1 == batches ? end - (start + static_cast<double>(b) * length_) : length_;
    }
  }

  bool observing(double t) const { return t >= start_ && t < end_; }

  std::size_t batch_of(double t) const {
    if (batches_ == 1) return 0;
    auto b = static_cast<std::size_t>((t - start_) / length_);
    return std::min(b, batches_ - 1);
  }

  void dwell(double from, double to, std::size_t level) {
    from = std::max(from, start_);
    to = std::min(to, end_);
    if (to <= from) return;
    if (batches_ == 1) {
      stats_[0].occupancy_time[level] += to - from;
      return;
    }
    std::size_t b = batch_of(from);
    while (from < to) {
      const double boundary = b + 1 == batches_ ? end_ : start_ + static_cast<double>(b + 1) * length_;
      const double stop = std::min(to, boundary);
      stats_[b].occupancy_time[level] += stop - from;
      from = stop;
      ++b;
    }
  }

  ReplicationStats& batch(std::size_t b) { return stats_[b]; }
  std::vector<ReplicationStats> release() { return std::move(stats_); }

 private:
  double start_;
  double end_;
  std::size_t batches_;
  double length_;
  std::vector<ReplicationStats> stats_;
};

// Event loop shared by the Markovian and trace-driven modes. `next_arrival`
// yields arrivals in time order; `holding` draws a holding time per class.
template <class ArrivalSource, class HoldingSampler>
std::vector<ReplicationStats> run_loss_system(const SystemConfig& cfg, double horizon, double warmup,
                                              std::size_t batches, ArrivalSource&& next_arrival,
                                              HoldingSampler&& holding) {
  const std::size_t k = cfg.class_count();
  const int capacity = cfg.capacity;
  std::vector<int> bandwidth(k);
  std::vector<int> threshold(k);
  for (std::size_t i = 0; i < k; ++i) {
    bandwidth[i] = cfg.classes[i].bandwidth;
    threshold[i] = cfg.classes[i].admission_threshold;
  }

  Window window(warmup, horizon, batches, k, static_cast<std::size_t>(capacity) + 1);
  std::priority_queue<Departure, std::vector<Departure>, LaterFirst> departures;
  std::vector<int> in_service(k, 0);
  int used = 0;
  double now = 0.0;
  std::uint64_t seq = 0;
  std::uint64_t events = 0;

  std::optional<ArrivalEvent> pending = next_arrival();
  while (true) {
    const double t_dep = departures.empty() ? kInf : departures.top().time;
    const double t_arr = pending ? pending->time : kInf;
    const double t_next = std::min(t_dep, t_arr);
    if (t_next >= horizon) {
      window.dwell(now, horizon, static_cast<std::size_t>(used));
      break;
    }
    window.dwell(now, t_next, static_cast<std::size_t>(used));
    now = t_next;
    ++events;

    if (t_dep <= t_arr) {
      const Departure d = departures.top();
      departures.pop();
      --in_service[d.class_index];
      used -= bandwidth[d.class_index];
      if (used < 0 || in_service[d.class_index] < 0) throw std::logic_error("channel accounting went negative");
      continue;
    }

    const std::size_t i = pending->class_index;
    const bool counted = window.observing(now);
    ReplicationStats* batch = counted ? &window.batch(window.batch_of(now)) : nullptr;
    if (batch) ++batch->offered[i];
    if (capacity - used >= threshold[i]) {
      used += bandwidth[i];
      ++in_service[i];
      if (used > capacity || capacity - (used - bandwidth[i]) < threshold[i]) {
        throw std::logic_error("admission violated the threshold rule");
      }
      departures.push(Departure{now + holding(i), seq++, i});
    } else if (batch) {
      ++batch->blocked[i];
    }
    pending = next_arrival();
  }

  auto out = window.release();
  if (!out.empty()) out.front().events = events;
  return out;
}

double exponential(double rate, Rng& rng) { return -std::log(uniform_open01(rng)) / rate; }

void require_valid(const SystemConfig& cfg, const SimParams& params) {
  validate_config(cfg);
  auto v = sim_params_violations(params);
  if (!v.empty()) throw ConfigError(std::move(v));
}

}  // namespace

std::vector<std::string> sim_params_violations(const SimParams& p) {
  std::vector<std::string> v;
  if (!(std::isfinite(p.horizon) && p.horizon > 0.0)) v.push_back("simulation.horizon must be > 0");
  const double w = p.effective_warmup();
  if (!(std::isfinite(w) && w >= 0.0 && w < p.horizon)) {
    v.push_back("simulation.warmup must satisfy 0 <= warmup < horizon");
  }
  if (p.replications < 1) v.push_back("simulation.replications must be >= 1");
  if (const auto* t = std::get_if<TraceDrivenService>(&p.service_model)) {
    for (std::size_t i = 0; i < t->holding.size(); ++i) {
      for (auto& m : distribution_violations(t->holding[i])) {
        v.push_back("simulation.holding[" + std::to_string(i) + "]: " + m);
      }
    }
  }
  return v;
}

double student_t_975(std::size_t dof) {
  if (dof == 0) throw std::invalid_argument("student_t_975 needs at least one degree of freedom");
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

ReplicationStats run_replication(const SystemConfig& cfg, const SimParams& params, std::size_t replication_index) {
  require_valid(cfg, params);
  Rng rng(derive_seed(params.seed, replication_index));
  const std::size_t k = cfg.class_count();

  std::vector<double> next_time(k, kInf);
  for (std::size_t i = 0; i < k; ++i) {
    if (cfg.classes[i].arrival_rate > 0.0) next_time[i] = exponential(cfg.classes[i].arrival_rate, rng);
  }
  auto arrivals = [&]() -> std::optional<ArrivalEvent> {
    auto it = std::min_element(next_time.begin(), next_time.end());
    if (*it == kInf) return std::nullopt;
    const auto i = static_cast<std::size_t>(it - next_time.begin());
    ArrivalEvent e{*it, i};
    *it += exponential(cfg.classes[i].arrival_rate, rng);
    return e;
  };
  auto holding = [&](std::size_t i) { return exponential(cfg.classes[i].service_rate, rng); };

  auto runs = run_loss_system(cfg, params.horizon, params.effective_warmup(), 1, arrivals, holding);
  return std::move(runs.front());
}

SimStats aggregate(const std::vector<ReplicationStats>& runs, std::size_t class_count) {
  SimStats out;
  out.replications = runs.size();
  out.per_class.resize(class_count);

  auto summarize = [](const std::vector<double>& samples, std::optional<double>& mean,
                      std::optional<double>& half_width) {
    if (samples.empty()) return;
    double m = 0.0;
    for (double s : samples) m += s;
    m /= static_cast<double>(samples.size());
    mean = m;
    if (samples.size() < 2) return;
    double ss = 0.0;
    for (double s : samples) ss += (s - m) * (s - m);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    half_width = student_t_975(samples.size() - 1) * sd / std::sqrt(static_cast<double>(samples.size()));
  };

  for (std::size_t i = 0; i < class_count; ++i) {
    auto& c = out.per_class[i];
    std::vector<double> ratios;
    for (const auto& r : runs) {
      c.offered += r.offered[i];
      c.blocked += r.blocked[i];
      if (r.offered[i] > 0) ratios.push_back(static_cast<double>(r.blocked[i]) / static_cast<double>(r.offered[i]));
    }
    summarize(ratios, c.blocking, c.half_width);
  }

  std::vector<double> overall;
  for (const auto& r : runs) {
    std::uint64_t offered = 0;
    std::uint64_t blocked = 0;
    for (std::size_t i = 0; i < class_count; ++i) {
      offered += r.offered[i];
      blocked += r.blocked[i];
    }
    if (offered > 0) overall.push_back(static_cast<double>(blocked) / static_cast<double>(offered));
  }
  summarize(overall, out.overall, out.overall_half_width);

  if (!runs.empty()) {
    out.occupancy_histogram.assign(runs.front().occupancy_time.size(), 0.0);
    for (const auto& r : runs) {
      for (std::size_t l = 0; l < r.occupancy_time.size(); ++l) {
        out.occupancy_histogram[l] += r.occupancy_time[l] / r.observed_time;
      }
    }
    for (auto& h : out.occupancy_histogram) h /= static_cast<double>(runs.size());
  }
  return out;
}

SimStats run_simulation(const SystemConfig& cfg, const SimParams& params) {
  require_valid(cfg, params);
  std::vector<ReplicationStats> runs(params.replications);
  const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (workers == 1 || params.replications == 1) {
    for (std::size_t r = 0; r < runs.size(); ++r) runs[r] = run_replication(cfg, params, r);
  } else {
    for (std::size_t first = 0; first < runs.size(); first += workers) {
      const std::size_t last = std::min(runs.size(), first + workers);
      std::vector<std::future<ReplicationStats>> jobs;
      for (std::size_t r = first; r < last; ++r) {
        jobs.push_back(std::async(std::launch::async, [&cfg, &params, r] { return run_replication(cfg, params, r); }));
      }
      for (std::size_t r = first; r < last; ++r) runs[r] = jobs[r - first].get();
    }
  }
  return aggregate(runs, cfg.class_count());
}

SimStats run_trace_driven(const SystemConfig& cfg, const ArrivalTrace& trace,
                          const std::vector<DistributionSpec>& holding, const SimParams& params) {
  require_valid(cfg, params);
  if (holding.size() != cfg.class_count()) {
    throw std::invalid_argument("trace-driven mode needs one holding-time distribution per class");
  }
  for (const auto& h : holding) validate_distribution(h);
  for (std::size_t e = 0; e < trace.events.size(); ++e) {
    if (trace.events[e].class_index >= cfg.class_count()) {
      throw std::invalid_argument("trace event " + std::to_string(e) + " has class index out of range");
    }
    if (!(trace.events[e].time >= 0.0) || (e > 0 && trace.events[e].time < trace.events[e - 1].time)) {
      throw std::invalid_argument("trace is not sorted by time");
    }
  }

  Rng rng(derive_seed(params.seed, 0));
  std::size_t cursor = 0;
  auto arrivals = [&]() -> std::optional<ArrivalEvent> {
    if (cursor == trace.events.size()) return std::nullopt;
    return trace.events[cursor++];
  };
  auto sample_holding = [&](std::size_t i) { return sample_distribution(holding[i], rng); };

  auto batches = run_loss_system(cfg, params.horizon, params.effective_warmup(), params.replications, arrivals,
                                 sample_holding);
  return aggregate(batches, cfg.class_count());
}

}  // namespace cacperf
