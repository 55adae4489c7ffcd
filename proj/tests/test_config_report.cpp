#include "quad/config.hpp"
#include "quad/report.hpp"

#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <numbers>
#include <sstream>

using namespace quad;

namespace {

const double kTwoPi = 2 * std::numbers::pi;

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return load_config(in);
}

std::string error_key(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

const std::string kTwoLevel =
    "scenario = two_level\n"
    "protocols = pi, faquad, siquad\n"
    "omega_m_hz = 150e3   # microwave\n"
    "delta_m_hz = 10e6\n";

}  // namespace

TEST(Config, ParsesTwoLevelAndConvertsHzOnce) {
  const RunConfig cfg = parse(kTwoLevel + "T_pi_tau_pi = 1\nT_siquad_tau_pi = 5.83\nT_faquad_s = 2.11e-5\n");
  EXPECT_EQ(cfg.scenario.kind, ScenarioKind::TwoLevel);
  EXPECT_DOUBLE_EQ(cfg.scenario.omega_m.rad_per_s(), kTwoPi * 150e3);
  EXPECT_DOUBLE_EQ(cfg.scenario.delta_m.rad_per_s(), kTwoPi * 10e6);
  EXPECT_EQ(cfg.protocols, (std::vector<Protocol>{Protocol::FlatPi, Protocol::Faquad, Protocol::Siquad}));
  EXPECT_EQ(cfg.scenario.steps, 100000u);
  EXPECT_DOUBLE_EQ(cfg.durations.at(Protocol::FlatPi), cfg.scenario.tau_pi());
  EXPECT_DOUBLE_EQ(cfg.durations.at(Protocol::Siquad), 5.83 * cfg.scenario.tau_pi());
  EXPECT_DOUBLE_EQ(cfg.durations.at(Protocol::Faquad), 2.11e-5);
  EXPECT_FALSE(cfg.sweep.has_value());
}

TEST(Config, ParametersEchoRoundTrip) {
  const RunConfig cfg = parse(kTwoLevel + "T_s = 2e-5\nsteps = 1234\nmethod = rk4\n");
  std::map<std::string, std::string> echo;
  for (const auto& [k, v] : cfg.scenario.describe()) echo[k] = v;
  EXPECT_DOUBLE_EQ(std::stod(echo.at("omega_m_rad_s")), kTwoPi * 150e3);
  EXPECT_DOUBLE_EQ(std::stod(echo.at("delta_m_rad_s")), kTwoPi * 10e6);
  EXPECT_EQ(echo.at("steps"), "1234");
  EXPECT_EQ(echo.at("method"), "rk4");
  EXPECT_EQ(echo.at("scenario"), "two_level");
}

TEST(Config, ThreeLevelDefaults) {
  const RunConfig cfg = parse(
      "scenario = three_level\nprotocols = siquad, stirap\nomega0_hz = 5e6\ndelta_big_hz = 10e9\n"
      "delta_m_hz = 10e6\ngamma_hz = 5.6e6\nT_s = 2.85e-3\n");
  EXPECT_EQ(cfg.scenario.steps, 500000u);
  EXPECT_EQ(cfg.scenario.omega_m.rad_per_s(), 0.0);
  EXPECT_DOUBLE_EQ(cfg.scenario.gamma.rad_per_s(), kTwoPi * 5.6e6);
  EXPECT_DOUBLE_EQ(cfg.durations.at(Protocol::Stirap), 2.85e-3);
}

TEST(Config, SweepSectionUnits) {
  const RunConfig cfg = parse(kTwoLevel + "T_s = 2e-5\n[sweep]\naxis = detuning_offset, duration\n"
                                          "detuning_unit = gap\ndetuning_offset_lo = -1\ndetuning_offset_hi = 1\n"
                                          "duration_unit = tau_pi\nduration_lo = 0\nduration_hi = 10\n"
                                          "duration_points = 200\n");
  ASSERT_TRUE(cfg.sweep);
  ASSERT_EQ(cfg.sweep->windows.size(), 2u);
  const AxisWindow& d = cfg.sweep->windows[0];
  EXPECT_EQ(d.axis, SweepAxis::DetuningOffset);
  EXPECT_DOUBLE_EQ(d.lo, -kTwoPi * 150e3);
  EXPECT_EQ(d.points, 41u);
  const AxisWindow& t = cfg.sweep->windows[1];
  EXPECT_DOUBLE_EQ(t.hi, 10 * cfg.scenario.tau_pi());
  EXPECT_EQ(t.points, 200u);
}

TEST(Config, DefaultWindows) {
  const RunConfig cfg = parse(kTwoLevel + "T_s = 2e-5\n[sweep]\naxis = amplitude_scale\n");
  EXPECT_EQ(cfg.sweep->windows[0].lo, 0.8);
  EXPECT_EQ(cfg.sweep->windows[0].hi, 1.2);
  EXPECT_EQ(cfg.sweep->windows[0].points, 41u);
  const auto defaults = default_windows(cfg.scenario);
  ASSERT_EQ(defaults.size(), 2u);
  EXPECT_DOUBLE_EQ(defaults[1].hi, cfg.scenario.gap().rad_per_s());
}

TEST(Config, ErrorsNameTheKey) {
  EXPECT_EQ(error_key("scenario = two_level\nprotocol = siquad\nomega_m_hz = 150e3\n"), "delta_m_hz");
  EXPECT_EQ(error_key(kTwoLevel + "bogus = 1\n"), "bogus");
  EXPECT_EQ(error_key(kTwoLevel + "omega_m_hz = 1\n"), "omega_m_hz");
  EXPECT_EQ(error_key(kTwoLevel + "T_siquad_s = 1e-5\nT_siquad_tau_pi = 5\n"), "T_siquad_s");
  EXPECT_EQ(error_key(kTwoLevel + "T_s = 1e-5\nT_tau_pi = 5\n"), "T_s");
  EXPECT_EQ(error_key(kTwoLevel + "T_stirap_s = 1e-5\n"), "T_stirap_s");
  EXPECT_EQ(error_key(kTwoLevel + "steps = 2.5\n"), "steps");
  EXPECT_EQ(error_key(kTwoLevel + "method = euler\n"), "method");
  EXPECT_EQ(error_key("protocol = pi\nomega_m_hz = 1\n"), "scenario");
  EXPECT_EQ(error_key("scenario = two_level\nprotocol = stirap\nomega_m_hz = 1\n"), "protocols");
  EXPECT_EQ(error_key("scenario = three_level\nprotocol = stirap\nomega0_hz = 1\ndelta_big_hz = 1\n"), "gamma_hz");
  EXPECT_EQ(error_key(kTwoLevel + "[sweep]\naxis = amplitude_scale\nwidth = 3\n"), "width");
  EXPECT_EQ(error_key(kTwoLevel + "[sweep]\naxis = sideways\n"), "axis");
  EXPECT_EQ(error_key(kTwoLevel + "[sweep]\naxis = duration\n"), "lo");
  EXPECT_EQ(error_key(kTwoLevel + "[other]\n"), "[other]");
  EXPECT_EQ(error_key(kTwoLevel + "omega_m_hz 5\n"), "line 5");
  EXPECT_EQ(error_key(kTwoLevel + "[sweep]\naxis = amplitude_scale\nlo = 1.2\nhi = 0.8\n"), "amplitude_scale_lo");
}

TEST(Config, SampledProtocolNeedsTable) {
  EXPECT_EQ(error_key("scenario = two_level\nprotocol = sampled\nomega_m_hz = 150e3\n"), "schedule_table");
}

TEST(Svg, WellFormedWithOnePolylinePerSeries) {
  LineChart chart;
  chart.title = "error <vs> scale & more";
  chart.x_label = "x";
  chart.y_label = "1 - F";
  chart.series = {{"siquad", {0.9, 1.0, 1.1}, {1e-3, 1e-6, 0.0}}, {"pi", {0.9, 1.0, 1.1}, {0.02, 1e-12, 0.02}}};
  std::ostringstream out;
  write_svg(out, chart);
  std::istringstream in(out.str());
  boost::property_tree::ptree tree;
  ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
  int polylines = 0;
  for (const auto& [name, node] : tree.get_child("svg")) {
    if (name == "polyline") ++polylines;
  }
  EXPECT_EQ(polylines, 2);
  EXPECT_NE(out.str().find("1e-6"), std::string::npos);
}

TEST(Svg, SweepChartGroupsRowsByProtocol) {
  SweepResult r{ScenarioKind::TwoLevel, SweepAxis::Duration, Method::PiecewiseExpm, 10, {}, {}, 0.0};
  for (Protocol p : {Protocol::Siquad, Protocol::FlatPi}) {
    for (int i = 0; i < 4; ++i) r.rows.push_back({p, i * 2.0, i * 2.0, {0.5, 0.5, 1.0}});
  }
  const LineChart chart = sweep_chart(r, 2.0, "T / tau_pi");
  ASSERT_EQ(chart.series.size(), 2u);
  EXPECT_EQ(chart.series[1].name, "pi");
  EXPECT_EQ(chart.series[0].x.back(), 3.0);
}
