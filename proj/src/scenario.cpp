#include "cacperf/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cacperf/errors.hpp"

namespace cacperf {

namespace {

using json = nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Field access on one JSON object that remembers which keys were consumed,
// so leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    if (!node_.contains(key)) fail(at(key), "missing required key");
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  long long integer(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<long long>();
  }

  std::string text(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!used_.contains(it.key())) fail(at(it.key()), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

const json& array_at(ObjectReader& r, const std::string& key) {
  const auto& v = r.raw(key);
  if (!v.is_array()) ObjectReader::fail(r.at(key), "expected an array");
  return v;
}

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

int to_int(long long v, const std::string& where) {
  if (v < -2'000'000'000LL || v > 2'000'000'000LL) ObjectReader::fail(where, "integer out of range");
  return static_cast<int>(v);
}

std::size_t class_position(long long one_based, const std::string& where) {
  if (one_based < 1) ObjectReader::fail(where, "class labels are 1-based");
  return static_cast<std::size_t>(one_based - 1);
}

DistributionSpec parse_distribution(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  const std::string type = r.text("type");
  DistributionSpec spec;
  if (type == "exponential") {
    spec = Exponential{r.number("rate")};
  } else if (type == "lognormal") {
    spec = Lognormal{r.number("log_mean"), r.number("log_stdev")};
  } else if (type == "weibull") {
    spec = Weibull{r.number("shape"), r.number("scale")};
  } else if (type == "bipareto") {
    spec = BiPareto{r.number("alpha"), r.number("beta"), r.number("breakpoint"), r.number("minimum")};
  } else if (type == "constant") {
    spec = Constant{r.number("value")};
  } else {
    ObjectReader::fail(r.at("type"), "unknown distribution '" + type + "'");
  }
  r.finish();
  return spec;
}

TrafficClassSpec parse_class(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  TrafficClassSpec c;
  c.name = r.has("name") ? r.text("name") : std::string{};
  c.arrival_rate = r.number("arrival_rate");
  c.service_rate = r.number("service_rate");
  c.bandwidth = r.has("bandwidth") ? to_int(r.integer("bandwidth"), r.at("bandwidth")) : 1;
  c.admission_threshold = to_int(r.integer("admission_threshold"), r.at("admission_threshold"));
  r.finish();
  return c;
}

RateFunction parse_rate_function(ObjectReader& r) {
  if (r.has("rate")) return RateFunction::constant(r.number("rate"));
  RateFunction f;
  const auto& segs = array_at(r, "segments");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    ObjectReader s(segs[i], index_path(r.at("segments"), i));
    f.segments.push_back(RateSegment{s.number("start"), s.number("rate")});
    s.finish();
  }
  return f;
}

ProcessSpec parse_process(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  const std::string type = r.text("type");
  ProcessSpec spec;
  if (type == "poisson") {
    spec = PoissonProcess{parse_rate_function(r)};
  } else if (type == "mmpp") {
    spec = MmppParams{r.number("rate_state1"), r.number("rate_state2"), r.number("switch_12"),
                      r.number("switch_21")};
  } else if (type == "renewal") {
    spec = RenewalProcess{parse_distribution(r.raw("interarrival"), r.at("interarrival"))};
  } else if (type == "population") {
    PopulationParams p;
    p.epoch = r.number("epoch");
    p.per_user_rate = r.number("per_user_rate");
    ObjectReader u(r.raw("user_count"), r.at("user_count"));
    const std::string kind = u.text("type");
    if (kind == "uniform") {
      p.user_count = UniformCount{to_int(u.integer("low"), u.at("low")), to_int(u.integer("high"), u.at("high"))};
    } else if (kind == "lognormal") {
      p.user_count = Lognormal{u.number("log_mean"), u.number("log_stdev")};
    } else {
      ObjectReader::fail(u.at("type"), "user_count must be uniform or lognormal");
    }
    u.finish();
    spec = p;
  } else {
    ObjectReader::fail(r.at("type"), "unknown process '" + type + "'");
  }
  r.finish();
  return spec;
}

WeightSchedule parse_weight(const json& node, const std::string& path) {
  if (node.is_number()) return WeightSchedule::constant(node.get<double>());
  if (!node.is_array()) ObjectReader::fail(path, "expected a number or an array of segments");
  WeightSchedule w;
  w.segments.clear();
  for (std::size_t i = 0; i < node.size(); ++i) {
    ObjectReader s(node[i], index_path(path, i));
    w.segments.push_back(WeightSegment{s.number("start"), s.number("weight")});
    s.finish();
  }
  return w;
}

TrafficMixtureSpec parse_traffic(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  TrafficMixtureSpec mix;
  const auto& comps = array_at(r, "components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    ObjectReader c(comps[i], index_path(r.at("components"), i));
    TrafficComponent comp;
    comp.class_index = class_position(c.integer("class"), c.at("class"));
    comp.role = c.has("role") ? c.text("role") : std::string{};
    comp.weight = c.has("weight") ? parse_weight(c.raw("weight"), c.at("weight")) : WeightSchedule::constant(1.0);
    comp.process = parse_process(c.raw("process"), c.at("process"));
    c.finish();
    mix.components.push_back(std::move(comp));
  }
  r.finish();
  return mix;
}

SimParams parse_simulation(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  SimParams p;
  p.horizon = r.number("horizon");
  p.warmup = r.optional_number("warmup");
  if (r.has("replications")) {
    const auto reps = r.integer("replications");
    if (reps < 0) ObjectReader::fail(r.at("replications"), "must be non-negative");
    p.replications = static_cast<std::size_t>(reps);
  }
  if (r.has("seed")) {
    const auto& s = r.raw("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      ObjectReader::fail(r.at("seed"), "expected a non-negative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }
  if (r.has("service_model")) {
    const auto& m = r.raw("service_model");
    if (m.is_string() && m.get<std::string>() == "markovian") {
      p.service_model = MarkovianService{};
    } else if (m.is_object()) {
      ObjectReader t(m, r.at("service_model"));
      ObjectReader td(t.raw("trace_driven"), t.at("trace_driven"));
      const auto& hold = array_at(td, "holding");
      TraceDrivenService service;
      for (std::size_t i = 0; i < hold.size(); ++i) {
        service.holding.push_back(parse_distribution(hold[i], index_path(td.at("holding"), i)));
      }
      td.finish();
      t.finish();
      p.service_model = std::move(service);
    } else {
      ObjectReader::fail(r.at("service_model"), "expected \"markovian\" or {\"trace_driven\": ...}");
    }
  }
  r.finish();
  return p;
}

SweepSettings parse_sweep(const json& node, const std::string& path) {
  ObjectReader r(node, path);
  SweepSettings s;
  s.swept_class = class_position(r.integer("class"), r.at("class"));
  if (r.has("grid")) {
    const auto& g = array_at(r, "grid");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) ObjectReader::fail(index_path(r.at("grid"), i), "expected a number");
      s.grid.push_back(g[i].get<double>());
    }
  } else {
    const double from = r.number("lambda_from");
    const double to = r.number("lambda_to");
    const auto steps = r.integer("steps");
    if (steps < 1) ObjectReader::fail(r.at("steps"), "must be >= 1");
    s.grid = linear_grid(from, to, static_cast<std::size_t>(steps));
  }
  if (r.has("modes")) {
    const auto& m = array_at(r, "modes");
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i].is_string()) ObjectReader::fail(index_path(r.at("modes"), i), "expected a string");
      try {
        s.modes.push_back(parse_sweep_mode(m[i].get<std::string>()));
      } catch (const ModeError& e) {
        ObjectReader::fail(index_path(r.at("modes"), i), e.what());
      }
    }
  } else {
    s.modes = {SweepMode::ctmc};
  }
  r.finish();
  return s;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    ObjectReader r(root, "");
    Scenario s;
    s.config.capacity = to_int(r.integer("capacity"), "capacity");
    const auto& classes = array_at(r, "classes");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      s.config.classes.push_back(parse_class(classes[i], index_path("classes", i)));
    }
    if (r.has("rat_labels")) {
      const auto& labels = array_at(r, "rat_labels");
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!labels[i].is_string()) ObjectReader::fail(index_path("rat_labels", i), "expected a string");
        s.config.rat_labels.push_back(labels[i].get<std::string>());
      }
    }
    if (r.has("traffic")) s.traffic = parse_traffic(r.raw("traffic"), "traffic");
    if (r.has("simulation")) s.simulation = parse_simulation(r.raw("simulation"), "simulation");
    if (r.has("sweep")) s.sweep = parse_sweep(r.raw("sweep"), "sweep");
    r.finish();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::vector<std::string> scenario_violations(const Scenario& scenario) {
  auto v = config_violations(scenario.config);
  const std::size_t k = scenario.config.class_count();
  if (scenario.traffic) {
    for (auto& m : mixture_violations(*scenario.traffic)) v.push_back("traffic." + m);
    for (std::size_t i = 0; i < scenario.traffic->components.size(); ++i) {
      if (scenario.traffic->components[i].class_index >= k) {
        v.push_back("traffic.components[" + std::to_string(i) + "].class: no such class");
      }
    }
  }
  if (scenario.simulation) {
    auto more = sim_params_violations(*scenario.simulation);
    v.insert(v.end(), more.begin(), more.end());
    if (const auto* t = std::get_if<TraceDrivenService>(&scenario.simulation->service_model)) {
      if (t->holding.size() != k) v.push_back("simulation.service_model: one holding distribution per class required");
      if (!scenario.traffic) v.push_back("simulation.service_model: trace_driven needs a traffic section");
    }
  }
  if (scenario.sweep) {
    SweepSpec probe;
    probe.base_config = scenario.config;
    probe.swept_class = scenario.sweep->swept_class;
    probe.grid = scenario.sweep->grid;
    probe.modes = scenario.sweep->modes;
    probe.sim_params = scenario.simulation;
    auto more = sweep_violations(probe);
    v.insert(v.end(), more.begin(), more.end());
  }
  return v;
}

ordered_json to_json(const SystemConfig& cfg) {
  ordered_json j;
  j["capacity"] = cfg.capacity;
  j["classes"] = ordered_json::array();
  for (const auto& c : cfg.classes) {
    j["classes"].push_back(ordered_json{{"name", c.name},
                                        {"arrival_rate", c.arrival_rate},
                                        {"service_rate", c.service_rate},
                                        {"bandwidth", c.bandwidth},
                                        {"admission_threshold", c.admission_threshold}});
  }
  j["rat_labels"] = cfg.rat_labels;
  return j;
}

ordered_json to_json(const DistributionSpec& spec) {
  return std::visit(
      overloaded{
          [](const Exponential& d) { return ordered_json{{"type", "exponential"}, {"rate", d.rate}}; },
          [](const Lognormal& d) {
            return ordered_json{{"type", "lognormal"}, {"log_mean", d.log_mean}, {"log_stdev", d.log_stdev}};
          },
          [](const Weibull& d) { return ordered_json{{"type", "weibull"}, {"shape", d.shape}, {"scale", d.scale}}; },
          [](const BiPareto& d) {
            return ordered_json{{"type", "bipareto"},
                                {"alpha", d.alpha},
                                {"beta", d.beta},
                                {"breakpoint", d.breakpoint},
                                {"minimum", d.minimum}};
          },
          [](const Constant& d) { return ordered_json{{"type", "constant"}, {"value", d.value}}; },
      },
      spec);
}

namespace {

ordered_json process_json(const ProcessSpec& spec) {
  return std::visit(
      overloaded{
          [](const PoissonProcess& p) {
            ordered_json segs = ordered_json::array();
            for (const auto& s : p.rate.segments) segs.push_back(ordered_json{{"start", s.start}, {"rate", s.rate}});
            return ordered_json{{"type", "poisson"}, {"segments", segs}};
          },
          [](const MmppParams& p) {
            return ordered_json{{"type", "mmpp"},
                                {"rate_state1", p.rate_state1},
                                {"rate_state2", p.rate_state2},
                                {"switch_12", p.switch_12},
                                {"switch_21", p.switch_21}};
          },
          [](const RenewalProcess& p) {
            return ordered_json{{"type", "renewal"}, {"interarrival", to_json(p.interarrival)}};
          },
          [](const PopulationParams& p) {
            ordered_json count;
            if (const auto* u = std::get_if<UniformCount>(&p.user_count)) {
              count = ordered_json{{"type", "uniform"}, {"low", u->low}, {"high", u->high}};
            } else {
              count = to_json(DistributionSpec{std::get<Lognormal>(p.user_count)});
            }
            return ordered_json{{"type", "population"},
                                {"epoch", p.epoch},
                                {"user_count", count},
                                {"per_user_rate", p.per_user_rate}};
          },
      },
      spec);
}

}  // namespace

ordered_json to_json(const TrafficMixtureSpec& mix) {
  ordered_json comps = ordered_json::array();
  for (const auto& c : mix.components) {
    ordered_json weight = ordered_json::array();
    for (const auto& w : c.weight.segments) weight.push_back(ordered_json{{"start", w.start}, {"weight", w.weight}});
    comps.push_back(ordered_json{{"class", c.class_index + 1},
                                 {"role", c.role},
                                 {"weight", weight},
                                 {"process", process_json(c.process)}});
  }
  return ordered_json{{"components", comps}};
}

ordered_json to_json(const SimParams& params) {
  ordered_json j;
  j["horizon"] = params.horizon;
  j["warmup"] = params.effective_warmup();
  j["replications"] = params.replications;
  j["seed"] = params.seed;
  if (const auto* t = std::get_if<TraceDrivenService>(&params.service_model)) {
    ordered_json hold = ordered_json::array();
    for (const auto& h : t->holding) hold.push_back(to_json(h));
    j["service_model"] = ordered_json{{"trace_driven", ordered_json{{"holding", hold}}}};
  } else {
    j["service_model"] = "markovian";
  }
  return j;
}

ordered_json to_json(const Scenario& scenario) {
  ordered_json j = to_json(scenario.config);
  if (scenario.traffic) j["traffic"] = to_json(*scenario.traffic);
  if (scenario.simulation) j["simulation"] = to_json(*scenario.simulation);
  if (scenario.sweep) {
    ordered_json modes = ordered_json::array();
    for (auto m : scenario.sweep->modes) modes.push_back(to_string(m));
    j["sweep"] = ordered_json{{"class", scenario.sweep->swept_class + 1},
                              {"grid", scenario.sweep->grid},
                              {"modes", modes}};
  }
  return j;
}

}  // namespace cacperf
