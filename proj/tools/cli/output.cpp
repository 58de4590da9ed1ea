#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace schedsim::cli {

std::string significant(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const int decimals = std::max(0, digits - 1 - magnitude);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string full(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_summary_csv(std::ostream& out, const std::vector<SimulationReport>& reports, int digits) {
  out << "scheme,n,r,k,reps,seed,mean_ms,stderr_ms\n";
  for (const auto& r : reports)
    out << r.scheme << ',' << r.n << ',' << r.r << ',' << r.k << ',' << r.reps << ',' << r.seed << ','
        << significant(r.mean_seconds * 1e3, digits) << ',' << significant(r.stderr_seconds * 1e3, digits) << '\n';
}

void write_summary_json(std::ostream& out, const std::vector<SimulationReport>& reports) {
  auto rows = nlohmann::json::array();
  for (const auto& r : reports)
    rows.push_back({{"scheme", r.scheme},
                    {"n", r.n},
                    {"r", r.r},
                    {"k", r.k},
                    {"reps", r.reps},
                    {"seed", r.seed},
                    {"mean_ms", r.mean_seconds * 1e3},
                    {"stderr_ms", r.stderr_seconds * 1e3}});
  out << rows.dump(2) << '\n';
}

void write_raw_csv(std::ostream& out, const std::vector<SimulationReport>& reports) {
  out << "scheme,rep,completion_seconds\n";
  for (const auto& r : reports)
    for (std::size_t i = 0; i < r.samples.size(); ++i) out << r.scheme << ',' << i << ',' << full(r.samples[i]) << '\n';
}

void write_line_chart_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x, const std::vector<Series>& series) {
  constexpr double width = 640, height = 420, left = 70, right = 130, top = 40, bottom = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  double x_lo = x.empty() ? 0 : x.front(), x_hi = x.empty() ? 1 : x.back();
  double y_lo = INFINITY, y_hi = -INFINITY;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v)) y_lo = std::min(y_lo, v), y_hi = std::max(y_hi, v);
  if (!std::isfinite(y_lo)) y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  const double pad = y_hi > y_lo ? 0.05 * (y_hi - y_lo) : 0.5;
  y_lo -= pad, y_hi += pad;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double v) { return top + (y_hi - v) / (y_hi - y_lo) * plot_h; };
  char buf[256];

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">", left + plot_w / 2);
  out << buf << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, plot_w, plot_h);
  out << buf;
  for (int t = 0; t <= 5; ++t) {
    const double v = y_lo + (y_hi - y_lo) * t / 5;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%s</text>\n", left - 6, py(v) + 4,
                  significant(v, 3).c_str());
    out << buf;
  }
  for (double v : x) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%g</text>\n", px(v),
                  top + plot_h + 16, v);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">", left + plot_w / 2, height - 12);
  out << buf << x_label << "</text>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"16\" y=\"%.1f\" text-anchor=\"middle\" transform=\"rotate(-90 16 %.1f)\">",
                top + plot_h / 2, top + plot_h / 2);
  out << buf << y_label << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", i ? " " : "", px(x[i]), py(series[s].y[i]));
      out << buf;
    }
    out << "\"/>\n";
    const double ly = top + 14 + 18 * s;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"%s\" stroke-width=\"2\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\">",
                  width - right + 12, ly, width - right + 32, ly, color, width - right + 38, ly + 4);
    out << buf << series[s].name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace schedsim::cli
