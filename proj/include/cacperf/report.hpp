#pragma once

#include <iosfwd>
#include <string>

#include "cacperf/analytic.hpp"
#include "cacperf/experiments.hpp"
#include "cacperf/scenario.hpp"
#include "cacperf/sim.hpp"

namespace cacperf {

inline constexpr int kReportDigits = 12;

const char* tool_version();

/// JSON number rounded to 12 significant digits, or null.
ordered_json json_number(double value);
ordered_json json_number(const std::optional<double>& value);

ordered_json solve_report_json(const BlockingReport& report, const Scenario& scenario);
ordered_json sim_report_json(const SimStats& stats, const Scenario& scenario, const SimParams& params);
ordered_json comparison_report_json(const ComparisonReport& report, const Scenario& scenario,
                                    const SimParams& params, std::optional<double> tolerance, bool passed);

/// Columns `lambda,class,mode,blocking,ci_low,ci_high`; class is 1-based
/// or `overall`, missing values are empty fields.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

/// Line chart of a sweep: one polyline per (class, mode) series.
std::string render_sweep_svg(const SweepResult& result, std::size_t swept_class,
                             const std::vector<std::string>& class_names);

/// Stable JSON text: two-space indent and a trailing newline.
std::string dump(const ordered_json& j);

}  // namespace cacperf
