#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "cacperf/format.hpp"
#include "cacperf/report.hpp"

namespace cacperf {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 180;
constexpr double kTop = 30;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
constexpr const char* kDashes[] = {"", "6,3", "2,3", "8,3,2,3"};

std::string num(double v) { return format_significant(v, 6); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_sweep_svg(const SweepResult& result, std::size_t swept_class,
                             const std::vector<std::string>& class_names) {
  // series key: (class position with overall last, mode)
  using Key = std::tuple<std::size_t, SweepMode>;
  std::map<Key, std::vector<std::pair<double, double>>> series;
  double x_min = INFINITY, x_max = -INFINITY, y_max = 0.0;
  for (const auto& r : result.rows) {
    x_min = std::min(x_min, r.lambda);
    x_max = std::max(x_max, r.lambda);
    if (!r.blocking) continue;
    const std::size_t cls = r.class_index.value_or(class_names.size());
    series[{cls, r.mode}].emplace_back(r.lambda, *r.blocking);
    y_max = std::max(y_max, *r.blocking);
  }
  if (!(x_max > x_min)) {
    x_min = std::isfinite(x_min) ? x_min - 0.5 : 0.0;
    x_max = x_min + 1.0;
  }
  y_max = y_max > 0.0 ? std::min(1.0, y_max * 1.05) : 1.0;
  if (y_max <= 0.0) y_max = 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - y / y_max * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\"/>\n</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 5.0;
    const double yv = y_max * t / 5.0;
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + plot_h + 16 << "\" text-anchor=\"middle\">"
        << num(xv) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
        << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text class=\"x-label\" x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">lambda(class " << swept_class + 1
      << ")</text>\n";
  svg << "<text class=\"y-label\" transform=\"translate(20," << kTop + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
         "blocking probability</text>\n";

  std::size_t legend_row = 0;
  for (const auto& [key, points] : series) {
    const auto [cls, mode] = key;
    const std::string label =
        (cls < class_names.size() ? class_names[cls] : std::string("overall")) + " (" + to_string(mode) + ")";
    const char* colour = kPalette[cls % std::size(kPalette)];
    const char* dash = kDashes[static_cast<std::size_t>(mode) % std::size(kDashes)];
    svg << "<polyline class=\"series\" data-series=\"" << escape(label) << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"2\"";
    if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << " points=\"";
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (p) svg << ' ';
      svg << num(px(points[p].first)) << ',' << num(py(points[p].second));
    }
    svg << "\"/>\n";
    const double ly = kTop + 12 + 16 * static_cast<double>(legend_row++);
    const double lx = kLeft + plot_w + 12;
    svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
        << colour << "\" stroke-width=\"2\"";
    if (*dash) svg << " stroke-dasharray=\"" << dash << "\"";
    svg << "/>\n<text x=\"" << lx + 30 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cacperf
