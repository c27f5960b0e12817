#include "cacperf/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "cacperf/format.hpp"

namespace cacperf {

std::string format_significant(double value, int digits) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  const std::string text = format_significant(value, digits);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

const char* tool_version() { return CACPERF_VERSION; }

ordered_json json_number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round_significant(value, kReportDigits);
}

ordered_json json_number(const std::optional<double>& value) {
  return value ? json_number(*value) : ordered_json(nullptr);
}

namespace {

ordered_json header(const char* command, const Scenario& scenario) {
  ordered_json j;
  j["tool"] = "cacperf";
  j["version"] = tool_version();
  j["command"] = command;
  j["config"] = to_json(scenario);
  return j;
}

std::string class_name(const SystemConfig& cfg, std::size_t i) {
  return cfg.classes[i].name.empty() ? "class" + std::to_string(i + 1) : cfg.classes[i].name;
}

}  // namespace

ordered_json solve_report_json(const BlockingReport& report, const Scenario& scenario) {
  ordered_json j = header("solve", scenario);
  j["mode"] = to_string(report.mode);
  j["variant"] = report.variant.empty() ? ordered_json(nullptr) : ordered_json(report.variant);
  ordered_json per_class = ordered_json::array();
  for (std::size_t i = 0; i < report.per_class.size(); ++i) {
    per_class.push_back(ordered_json{{"class", i + 1},
                                     {"name", class_name(scenario.config, i)},
                                     {"blocking", json_number(report.per_class[i])}});
  }
  j["per_class"] = per_class;
  j["overall"] = json_number(report.overall);
  j["validity_flag"] = report.valid();
  j["degenerate"] = report.degenerate();
  j["solver"] = report.solver ? ordered_json(to_string(*report.solver)) : ordered_json(nullptr);
  j["solver_residual"] = json_number(report.residual);
  return j;
}

ordered_json sim_report_json(const SimStats& stats, const Scenario& scenario, const SimParams& params) {
  ordered_json j = header("simulate", scenario);
  j["simulation"] = to_json(params);
  ordered_json per_class = ordered_json::array();
  for (std::size_t i = 0; i < stats.per_class.size(); ++i) {
    const auto& c = stats.per_class[i];
    per_class.push_back(ordered_json{{"class", i + 1},
                                     {"name", class_name(scenario.config, i)},
                                     {"offered", c.offered},
                                     {"blocked", c.blocked},
                                     {"blocking", json_number(c.blocking)},
                                     {"ci_half_width", json_number(c.half_width)},
                                     {"ci_available", c.half_width.has_value()}});
  }
  j["replications"] = stats.replications;
  j["per_class"] = per_class;
  j["overall"] = json_number(stats.overall);
  j["overall_ci_half_width"] = json_number(stats.overall_half_width);
  j["degenerate"] = stats.degenerate();
  ordered_json hist = ordered_json::array();
  for (double h : stats.occupancy_histogram) hist.push_back(json_number(h));
  j["occupancy_histogram"] = hist;
  return j;
}

ordered_json comparison_report_json(const ComparisonReport& report, const Scenario& scenario,
                                    const SimParams& params, std::optional<double> tolerance, bool passed) {
  ordered_json j = header("compare", scenario);
  j["simulation"] = to_json(params);
  ordered_json per_class = ordered_json::array();
  for (std::size_t i = 0; i < report.per_class.size(); ++i) {
    const auto& c = report.per_class[i];
    per_class.push_back(ordered_json{{"class", i + 1},
                                     {"name", class_name(scenario.config, i)},
                                     {"analytic", json_number(c.analytic)},
                                     {"simulated", json_number(c.estimate)},
                                     {"ci_half_width", json_number(c.half_width)},
                                     {"deviation", json_number(c.deviation)},
                                     {"covered", c.covered}});
  }
  j["per_class"] = per_class;
  j["max_deviation"] = json_number(report.max_deviation);
  j["coverage_fraction"] = json_number(report.coverage_fraction);
  j["degenerate"] = report.degenerate;
  j["tolerance"] = json_number(tolerance);
  j["passed"] = passed;
  return j;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "lambda,class,mode,blocking,ci_low,ci_high\n";
  auto field = [&](const std::optional<double>& v) {
    if (v) out << format_significant(*v, kReportDigits);
  };
  for (const auto& r : result.rows) {
    out << format_significant(r.lambda, kReportDigits) << ',';
    if (r.class_index) {
      out << (*r.class_index + 1);
    } else {
      out << "overall";
    }
    out << ',' << to_string(r.mode) << ',';
    field(r.blocking);
    out << ',';
    field(r.ci_low);
    out << ',';
    field(r.ci_high);
    out << '\n';
  }
}

namespace {

// Reports embed the resolved configuration, which may hold values such as a
// computed grid point 1.5999999999999999; round every float on the way out.
void round_floats(ordered_json& j) {
  if (j.is_number_float()) {
    j = json_number(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

}  // namespace

std::string dump(const ordered_json& j) {
  ordered_json copy = j;
  round_floats(copy);
  return copy.dump(2) + "\n";
}

}  // namespace cacperf
