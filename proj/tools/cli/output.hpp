#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "schedsim/monte_carlo.hpp"

namespace schedsim::cli {

/// Fixed-point rendering with `digits` significant figures, never in
/// exponent form ("0.726", "2358", "0.000123"). Infinity prints as "inf".
std::string significant(double value, int digits);

/// Round-trip precision.
std::string full(double value);

void write_summary_csv(std::ostream& out, const std::vector<SimulationReport>& reports, int digits);
void write_summary_json(std::ostream& out, const std::vector<SimulationReport>& reports);
void write_raw_csv(std::ostream& out, const std::vector<SimulationReport>& reports);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Minimal static line chart.
void write_line_chart_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace schedsim::cli
