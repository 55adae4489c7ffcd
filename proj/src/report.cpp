#include "quad/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace quad {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 460;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string tick_label(double v) {
  if (v == 0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-2) return fmt(v, "%.2g");
  return fmt(v, "%.4g");
}

// About five round-number ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (span / step <= 6) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

std::string xml_escape(const std::string& s) {
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

void write_svg(std::ostream& out, const LineChart& chart) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto y_of = [&](double y) { return chart.log_y ? std::log10(std::max(y, chart.y_floor)) : y; };
  for (const Series& s : chart.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("write_svg: series '" + s.name + "' is ragged");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, y_of(s.y[i]));
      ymax = std::max(ymax, y_of(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  }
  if (chart.log_y) {
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(chart.title) << "</text>\n";

  out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  const auto xt = linear_ticks(xmin, xmax);
  std::vector<double> yt;
  if (chart.log_y) {
    const int stride = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8)));
    for (double d = ymin; d <= ymax + 1e-9; d += stride) yt.push_back(d);
  } else {
    yt = linear_ticks(ymin, ymax);
  }
  for (double t : xt) out << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(px(t)) << "\" y2=\"" << kTop + ph << "\"/>\n";
  for (double t : yt) out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << fmt(py(t)) << "\"/>\n";
  out << "</g>\n";

  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : xt) {
    out << "<text x=\"" << fmt(px(t)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  for (double t : yt) {
    const std::string label = chart.log_y ? "1e" + fmt(t, "%.0f") : tick_label(t);
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py(t) + 4) << "\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
      << xml_escape(chart.x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + ph / 2 << ")\">" << xml_escape(chart.y_label) << "</text>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const Series& s = chart.series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    out << "<polyline data-series=\"" << xml_escape(s.name) << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << fmt(px(s.x[i])) << ',' << fmt(py(y_of(s.y[i])));
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 20 * static_cast<double>(k);
    const double lx = kLeft + pw + 15;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 25 << "\" y2=\"" << ly << "\" stroke=\""
        << colour << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
}

LineChart sweep_chart(const SweepResult& sweep, double x_unit, const std::string& x_label) {
  if (!(x_unit > 0)) throw std::invalid_argument("sweep_chart: x_unit must be > 0");
  LineChart chart;
  chart.title = to_string(sweep.scenario) + " " + to_string(sweep.axis) + " sweep";
  chart.x_label = x_label;
  chart.y_label = "transfer error 1 - F";
  for (const SweepRow& r : sweep.rows) {
    const std::string name = to_string(r.protocol);
    if (chart.series.empty() || chart.series.back().name != name) chart.series.push_back({name, {}, {}});
    chart.series.back().x.push_back(r.axis_value / x_unit);
    chart.series.back().y.push_back(r.metrics.error);
  }
  return chart;
}

}  // namespace quad
