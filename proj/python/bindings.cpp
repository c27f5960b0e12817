#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cacperf/analytic.hpp"
#include "cacperf/errors.hpp"
#include "cacperf/experiments.hpp"
#include "cacperf/scenario.hpp"
#include "cacperf/sim.hpp"
#include "cacperf/traffic.hpp"

namespace py = pybind11;
using namespace cacperf;

namespace {

py::dict sweep_row(const SweepRow& r) {
  py::dict d;
  d["lambda"] = r.lambda;
  d["class"] = r.class_index ? py::object(py::int_(*r.class_index + 1)) : py::object(py::str("overall"));
  d["mode"] = to_string(r.mode);
  d["blocking"] = r.blocking;
  d["ci_low"] = r.ci_low;
  d["ci_high"] = r.ci_high;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cacperf, m) {
  m.doc() = "Threshold call admission control: analytic blocking, simulation and sweeps";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<SolverError>(m, "SolverError");

  py::class_<TrafficClassSpec>(m, "TrafficClassSpec")
      .def(py::init([](std::string name, double arrival_rate, double service_rate, int bandwidth,
                       int admission_threshold) {
             return TrafficClassSpec{std::move(name), arrival_rate, service_rate, bandwidth, admission_threshold};
           }),
           py::arg("name") = "", py::arg("arrival_rate") = 0.0, py::arg("service_rate") = 1.0,
           py::arg("bandwidth") = 1, py::arg("admission_threshold") = 1)
      .def_readwrite("name", &TrafficClassSpec::name)
      .def_readwrite("arrival_rate", &TrafficClassSpec::arrival_rate)
      .def_readwrite("service_rate", &TrafficClassSpec::service_rate)
      .def_readwrite("bandwidth", &TrafficClassSpec::bandwidth)
      .def_readwrite("admission_threshold", &TrafficClassSpec::admission_threshold);

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init([](int capacity, std::vector<TrafficClassSpec> classes, std::vector<std::string> rats) {
             return SystemConfig{capacity, std::move(classes), std::move(rats)};
           }),
           py::arg("capacity"), py::arg("classes"), py::arg("rat_labels") = std::vector<std::string>{})
      .def_readwrite("capacity", &SystemConfig::capacity)
      .def_readwrite("classes", &SystemConfig::classes)
      .def_readwrite("rat_labels", &SystemConfig::rat_labels);

  m.def("default_scenario", &default_scenario);
  m.def("config_violations", &config_violations);
  m.def("validate_config", &validate_config, "Returns the config or raises ValueError");
  m.def(
      "admissible",
      [](const std::vector<int>& occupancy, std::size_t class_index, const SystemConfig& cfg) {
        return admissible(SystemState{occupancy}, class_index, cfg);
      },
      py::arg("occupancy"), py::arg("class_index"), py::arg("cfg"));
  m.def(
      "enumerate_states",
      [](const SystemConfig& cfg) {
        const auto space = enumerate_states(validate_config(cfg));
        std::vector<std::vector<int>> out;
        for (const auto& s : space.states()) out.push_back(s.occupancy);
        return out;
      },
      py::arg("cfg"));
  m.def("count_states", &count_states);

  py::class_<BlockingReport>(m, "BlockingReport")
      .def_readonly("per_class", &BlockingReport::per_class)
      .def_readonly("overall", &BlockingReport::overall)
      .def_readonly("variant", &BlockingReport::variant)
      .def_readonly("residual", &BlockingReport::residual)
      .def_property_readonly("mode", [](const BlockingReport& r) { return to_string(r.mode); })
      .def_property_readonly("validity_flag", &BlockingReport::valid)
      .def_property_readonly("degenerate", &BlockingReport::degenerate);

  m.def(
      "solve", [](const SystemConfig& cfg, const std::string& mode) { return solve(cfg, parse_solve_mode(mode)); },
      py::arg("cfg"), py::arg("mode") = "ctmc");
  m.def("erlang_b", &erlang_b, py::arg("capacity"), py::arg("offered_load"));
  m.def(
      "kaufman_roberts",
      [](int capacity, const std::vector<std::pair<double, int>>& classes) {
        std::vector<LoadClass> loads;
        for (const auto& [a, b] : classes) loads.push_back(LoadClass{a, b});
        auto r = kaufman_roberts(capacity, loads);
        return py::make_tuple(r.occupancy, r.blocking);
      },
      py::arg("capacity"), py::arg("classes"));
  m.def(
      "level_recurrence",
      [](const SystemConfig& cfg) {
        auto [res, report] = level_recurrence(cfg);
        py::dict d;
        d["unnormalized"] = res.unnormalized;
        d["normalized"] = res.normalized;
        d["load_ratio"] = res.load_ratio;
        d["report"] = report;
        return d;
      },
      py::arg("cfg"));

  py::class_<SimParams>(m, "SimParams")
      .def(py::init([](double horizon, std::optional<double> warmup, std::size_t replications, std::uint64_t seed) {
             SimParams p;
             p.horizon = horizon;
             p.warmup = warmup;
             p.replications = replications;
             p.seed = seed;
             return p;
           }),
           py::arg("horizon") = 1e5, py::arg("warmup") = py::none(), py::arg("replications") = 10,
           py::arg("seed") = 1)
      .def_readwrite("horizon", &SimParams::horizon)
      .def_readwrite("warmup", &SimParams::warmup)
      .def_readwrite("replications", &SimParams::replications)
      .def_readwrite("seed", &SimParams::seed);

  py::class_<ClassSimStats>(m, "ClassSimStats")
      .def_readonly("offered", &ClassSimStats::offered)
      .def_readonly("blocked", &ClassSimStats::blocked)
      .def_readonly("blocking", &ClassSimStats::blocking)
      .def_readonly("half_width", &ClassSimStats::half_width);

  py::class_<SimStats>(m, "SimStats")
      .def_readonly("per_class", &SimStats::per_class)
      .def_readonly("overall", &SimStats::overall)
      .def_readonly("overall_half_width", &SimStats::overall_half_width)
      .def_readonly("occupancy_histogram", &SimStats::occupancy_histogram)
      .def_readonly("replications", &SimStats::replications);

  m.def("run_simulation", &run_simulation, py::arg("cfg"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_sweep",
      [](const SystemConfig& cfg, std::size_t swept_class, std::vector<double> grid,
         const std::vector<std::string>& modes, std::optional<SimParams> sim) {
        SweepSpec spec;
        spec.base_config = cfg;
        spec.swept_class = swept_class;
        spec.grid = std::move(grid);
        spec.modes.clear();
        for (const auto& mode : modes) spec.modes.push_back(parse_sweep_mode(mode));
        spec.sim_params = std::move(sim);
        py::list rows;
        for (const auto& r : run_sweep(spec).rows) rows.append(sweep_row(r));
        return rows;
      },
      py::arg("cfg"), py::arg("swept_class"), py::arg("grid"), py::arg("modes") = std::vector<std::string>{"ctmc"},
      py::arg("sim_params") = py::none());

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("config", &Scenario::config)
      .def_readonly("simulation", &Scenario::simulation)
      .def_property_readonly("has_traffic", [](const Scenario& s) { return s.traffic.has_value(); })
      .def("violations", &scenario_violations);
  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
  m.def(
      "compose_traffic",
      [](const Scenario& s, double horizon, std::uint64_t seed) {
        if (!s.traffic) throw ModeError("scenario has no traffic section");
        std::vector<std::pair<double, std::size_t>> out;
        for (const auto& e : compose_traffic(*s.traffic, horizon, seed).events) out.emplace_back(e.time, e.class_index);
        return out;
      },
      py::arg("scenario"), py::arg("horizon"), py::arg("seed"));
}
