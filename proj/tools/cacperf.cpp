// cacperf: command-line front end for the admission-control performance lab.
//
// Exit codes: 0 success, 1 comparison failed, 2 invalid configuration or
// invocation, 3 scenario parse failure, 4 mode precondition failure,
// 5 I/O failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cacperf/analytic.hpp"
#include "cacperf/errors.hpp"
#include "cacperf/experiments.hpp"
#include "cacperf/random.hpp"
#include "cacperf/report.hpp"
#include "cacperf/scenario.hpp"
#include "cacperf/sim.hpp"
#include "cacperf/traffic.hpp"

namespace {

using namespace cacperf;

enum Exit : int {
  kOk = 0,
  kCompareFailed = 1,
  kInvalidConfig = 2,
  kParseFailure = 3,
  kModePrecondition = 4,
  kIoFailure = 5,
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

Scenario load_valid(const std::string& path) {
  Scenario s = load_scenario(path);
  if (auto v = scenario_violations(s); !v.empty()) throw ConfigError(std::move(v));
  return s;
}

std::vector<std::string> split_modes(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  std::string config;
  std::string out;
  std::string mode = "ctmc";
  std::optional<std::uint64_t> seed;
  bool use_default_sim = false;
  std::string trace_out;
  std::optional<long long> sweep_class;
  std::optional<double> lambda_from;
  std::optional<double> lambda_to;
  std::optional<long long> steps;
  std::string modes;
  std::string plot;
  std::optional<double> tolerance;
};

int cmd_validate(const Options& o) {
  Scenario s = load_scenario(o.config);
  if (auto v = scenario_violations(s); !v.empty()) throw ConfigError(std::move(v));
  emit(dump(to_json(s)), "-");
  return kOk;
}

int cmd_solve(const Options& o) {
  Scenario s = load_valid(o.config);
  const SolveMode mode = parse_solve_mode(o.mode);
  const BlockingReport report = solve(s.config, mode);
  emit(dump(solve_report_json(report, s)), o.out);
  return kOk;
}

SimParams simulation_params(const Scenario& s, const Options& o) {
  if (!s.simulation && !o.use_default_sim) {
    throw ConfigError({"simulation: section missing (add one or pass --default-sim)"});
  }
  SimParams p = s.simulation.value_or(SimParams{});
  if (o.seed) p.seed = *o.seed;
  return p;
}

int cmd_simulate(const Options& o) {
  Scenario s = load_valid(o.config);
  const SimParams params = simulation_params(s, o);
  SimStats stats;
  if (const auto* t = std::get_if<TraceDrivenService>(&params.service_model)) {
    const ArrivalTrace trace = compose_traffic(*s.traffic, params.horizon, derive_seed(params.seed, 1));
    if (!o.trace_out.empty()) {
      std::ostringstream csv;
      write_trace_csv(trace, csv);
      emit(csv.str(), o.trace_out);
    }
    stats = run_trace_driven(s.config, trace, t->holding, params);
  } else {
    if (!o.trace_out.empty()) throw ConfigError({"--trace-out needs a trace_driven service model"});
    stats = run_simulation(s.config, params);
  }
  emit(dump(sim_report_json(stats, s, params)), o.out);
  return kOk;
}

int cmd_sweep(const Options& o) {
  Scenario s = load_valid(o.config);
  SweepSpec spec;
  spec.base_config = s.config;
  spec.sim_params = s.simulation;
  if (o.seed && spec.sim_params) spec.sim_params->seed = *o.seed;

  SweepSettings settings = s.sweep.value_or(SweepSettings{0, linear_grid(0.2, 4.0, 20), {SweepMode::ctmc}});
  if (o.sweep_class) {
    if (*o.sweep_class < 1) throw ConfigError({"--class: class labels are 1-based"});
    settings.swept_class = static_cast<std::size_t>(*o.sweep_class - 1);
  }
  if (o.lambda_from || o.lambda_to || o.steps) {
    if (!(o.lambda_from && o.lambda_to && o.steps)) {
      throw ConfigError({"--lambda-from, --lambda-to and --steps must be given together"});
    }
    if (*o.steps < 1) throw ConfigError({"--steps must be >= 1"});
    settings.grid = linear_grid(*o.lambda_from, *o.lambda_to, static_cast<std::size_t>(*o.steps));
  }
  if (!o.modes.empty()) {
    settings.modes.clear();
    for (const auto& m : split_modes(o.modes)) settings.modes.push_back(parse_sweep_mode(m));
  }
  spec.swept_class = settings.swept_class;
  spec.grid = settings.grid;
  spec.modes = settings.modes;
  if (auto v = sweep_violations(spec); !v.empty()) throw ConfigError(std::move(v));

  const SweepResult result = run_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(result, csv);
  emit(csv.str(), o.out);
  if (!o.plot.empty()) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s.config.class_count(); ++i) {
      names.push_back(s.config.classes[i].name.empty() ? "class " + std::to_string(i + 1)
                                                      : s.config.classes[i].name);
    }
    emit(render_sweep_svg(result, spec.swept_class, names), o.plot);
  }
  return kOk;
}

int cmd_compare(const Options& o) {
  Scenario s = load_valid(o.config);
  if (!s.simulation) throw ConfigError({"simulation: compare needs a simulation section"});
  SimParams params = *s.simulation;
  if (o.seed) params.seed = *o.seed;
  if (o.tolerance && !(*o.tolerance >= 0.0)) throw ConfigError({"--tolerance must be >= 0"});

  const ComparisonReport report = compare_analytic_sim(s.config, params);
  bool passed = false;
  if (!report.degenerate) {
    if (o.tolerance) {
      passed = report.max_deviation <= *o.tolerance;
    } else {
      passed = report.coverage_fraction == 1.0;
    }
  }
  emit(dump(comparison_report_json(report, s, params, o.tolerance, passed)), o.out);
  return passed ? kOk : kCompareFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Call admission control performance laboratory"};
  app.set_version_flag("--version", std::string("cacperf ") + cacperf::tool_version());
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario file (JSON)")->required();
  };

  auto* validate = app.add_subcommand("validate", "Check a scenario file and echo it normalized");
  add_config(validate);

  auto* solve = app.add_subcommand("solve", "Analytic blocking probabilities");
  add_config(solve);
  solve->add_option("--mode", o.mode, "ctmc | literal1d | recurrence | kr | erlangb")->capture_default_str();
  solve->add_option("--out", o.out, "Report file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation");
  add_config(simulate);
  simulate->add_option("--seed", o.seed, "Override the scenario seed");
  simulate->add_option("--out", o.out, "Report file (default stdout)");
  simulate->add_flag("--default-sim", o.use_default_sim, "Use default simulation parameters if none are given");
  simulate->add_option("--trace-out", o.trace_out, "Write the generated arrival trace as CSV");

  auto* sweep = app.add_subcommand("sweep", "Sweep one class's arrival rate");
  add_config(sweep);
  sweep->add_option("--class", o.sweep_class, "Swept class (1-based)");
  sweep->add_option("--lambda-from", o.lambda_from, "First grid value");
  sweep->add_option("--lambda-to", o.lambda_to, "Last grid value");
  sweep->add_option("--steps", o.steps, "Number of grid points");
  sweep->add_option("--modes", o.modes, "Comma-separated: ctmc,literal1d,recurrence,sim");
  sweep->add_option("--seed", o.seed, "Override the simulation seed");
  sweep->add_option("--out", o.out, "CSV file (default stdout)");
  sweep->add_option("--plot", o.plot, "SVG plot file");

  auto* compare = app.add_subcommand("compare", "Analytic ctmc versus simulation");
  add_config(compare);
  compare->add_option("--tolerance", o.tolerance, "Pass if max |analytic - simulated| <= tolerance");
  compare->add_option("--seed", o.seed, "Override the simulation seed");
  compare->add_option("--out", o.out, "Report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*solve) return cmd_solve(o);
    if (*simulate) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o);
    if (*compare) return cmd_compare(o);
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "error: " << v << '\n';
    return kInvalidConfig;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ModeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModePrecondition;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModePrecondition;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kInvalidConfig;
}
