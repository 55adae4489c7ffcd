#ifndef QUAD_REPORT_HPP
#define QUAD_REPORT_HPP

#include "quad/sweeps.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace quad {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = true;
  double y_floor = 1e-16;  // log axis clamp for exact zeros
  std::vector<Series> series;
};

/// Static SVG: one <polyline> per series, axes with tick labels, legend.
void write_svg(std::ostream& out, const LineChart& chart);

/// Error vs axis value for each protocol. The axis is divided by `x_unit`
/// before plotting (e.g. tau_pi for durations).
LineChart sweep_chart(const SweepResult& sweep, double x_unit, const std::string& x_label);

std::string xml_escape(const std::string& s);

}  // namespace quad

#endif  // QUAD_REPORT_HPP
