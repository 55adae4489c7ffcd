// quad: simulate, sweep and compare population-transfer protocols.
//
//   quad simulate --config run.cfg --out results [--trajectory] [--schedule]
//   quad sweep    --config scan.cfg --out results [--plot]
//   quad compare  --config cmp.cfg  --out results [--plot]
//
// Exit status: 0 success, 1 configuration error, 2 integration failure.

#include "quad/config.hpp"
#include "quad/csv.hpp"
#include "quad/report.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;
using namespace quad;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  bool plot = false;
  bool trajectory = false;
  bool schedule = false;
};

std::ofstream open_output(const Options& opt, const RunConfig& cfg, const std::string& name) {
  const fs::path path = fs::path(opt.out) / (cfg.output_prefix + name);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

double duration_of(const RunConfig& cfg, Protocol p) {
  const auto it = cfg.durations.find(p);
  if (it == cfg.durations.end()) {
    throw ConfigError("T_s", "missing duration for protocol " + to_string(p) + " (T_s, T_tau_pi or T_" +
                                 to_string(p) + "_s)");
  }
  return it->second;
}

void write_parameters(const Options& opt, const RunConfig& cfg) {
  auto f = open_output(opt, cfg, "parameters.csv");
  f << "key,value\n";
  for (const auto& [k, v] : cfg.scenario.describe()) f << csv::join({k, v});
  for (const auto& [p, t] : cfg.durations) f << csv::join({"T_" + to_string(p) + "_s", csv::number(t)});
}

std::pair<double, std::string> axis_unit(const RunConfig& cfg, SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Duration:
      return {cfg.scenario.tau_pi(), "operation time T / tau_pi"};
    case SweepAxis::AmplitudeScale:
      if (cfg.sweep->amplitude_mode == AmplitudeMode::Additive) {
        return {2 * std::numbers::pi, "coupling offset (Hz)"};
      }
      return {1.0, "coupling amplitude scale"};
    case SweepAxis::DetuningOffset:
      return {cfg.scenario.gap().rad_per_s(), "detuning offset / gap"};
  }
  return {1.0, ""};
}

void plot_sweep(const Options& opt, const RunConfig& cfg, const SweepResult& sweep, const std::string& stem) {
  const auto [unit, label] = axis_unit(cfg, sweep.axis);
  auto f = open_output(opt, cfg, stem + "_" + to_string(sweep.axis) + ".svg");
  write_svg(f, sweep_chart(sweep, unit, label));
}

int cmd_simulate(const Options& opt, const RunConfig& cfg) {
  if (cfg.protocols.size() != 1) throw ConfigError("protocol", "simulate takes exactly one protocol");
  const Protocol p = cfg.protocols.front();
  const double duration = duration_of(cfg, p);
  EvolveRequest req = cfg.scenario.request(p, duration);
  req.store_trajectory = opt.trajectory;
  req.trajectory_stride = cfg.trajectory_stride;
  const EvolveResult r = evolve(req);
  const TransferMetrics m = transfer_metrics(r.final, 1);

  fs::create_directories(opt.out);
  write_parameters(opt, cfg);
  {
    auto f = open_output(opt, cfg, "metrics.csv");
    std::vector<std::string> header{"protocol", "scenario", "T_s", "fidelity", "error", "final_norm_sq"};
    std::vector<std::string> row{to_string(p), to_string(cfg.scenario.kind), csv::number(duration),
                                 csv::number(m.fidelity), csv::number(m.error), csv::number(m.final_norm_sq)};
    for (std::size_t i = 0; i < r.populations.size(); ++i) {
      header.push_back("pop" + std::to_string(i + 1));
      row.push_back(csv::number(r.populations[i]));
    }
    header.insert(header.end(), {"method", "steps"});
    row.insert(row.end(), {to_string(cfg.scenario.method), std::to_string(cfg.scenario.steps)});
    f << csv::join(header) << csv::join(row);
  }
  if (opt.trajectory) {
    auto f = open_output(opt, cfg, "trajectory.csv");
    write_trajectory_csv(f, r);
  }
  if (opt.schedule) {
    auto f = open_output(opt, cfg, "schedule.csv");
    write_schedule_csv(f, req.schedule, 1001);
  }

  std::cout << "protocol  " << to_string(p) << "\n"
            << "T_s       " << csv::number(duration) << "\n"
            << "fidelity  " << csv::number(m.fidelity) << "\n"
            << "error     " << csv::number(m.error) << "\n"
            << "norm_sq   " << csv::number(m.final_norm_sq) << "\n";
  return 0;
}

int cmd_sweep(const Options& opt, const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("[sweep]", "sweep needs a [sweep] section");
  std::vector<SweepResult> results;
  for (const AxisWindow& w : cfg.sweep->windows) {
    SweepSpec spec;
    spec.scenario = cfg.scenario;
    spec.protocols = cfg.protocols;
    spec.axis = w.axis;
    spec.lo = w.lo;
    spec.hi = w.hi;
    spec.points = w.points;
    spec.amplitude_mode = cfg.sweep->amplitude_mode;
    if (w.axis != SweepAxis::Duration) {
      for (Protocol p : cfg.protocols) spec.durations[p] = duration_of(cfg, p);
    }
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("[sweep]", e.what());
    }
    results.push_back(run_sweep(spec));
    std::cerr << "sweep " << to_string(w.axis) << ": " << results.back().rows.size() << " runs done\n";
  }

  fs::create_directories(opt.out);
  write_parameters(opt, cfg);
  {
    auto f = open_output(opt, cfg, "sweep.csv");
    for (std::size_t i = 0; i < results.size(); ++i) write_sweep_csv(f, results[i], i == 0);
  }
  if (opt.plot) {
    for (const SweepResult& s : results) plot_sweep(opt, cfg, s, "sweep");
  }
  for (const SweepResult& s : results) {
    std::cout << to_string(s.axis) << ": " << s.rows.size() << " rows\n";
  }
  return 0;
}

int cmd_compare(const Options& opt, const RunConfig& cfg) {
  std::map<Protocol, double> durations;
  for (Protocol p : cfg.protocols) durations[p] = duration_of(cfg, p);
  std::vector<AxisWindow> windows;
  AmplitudeMode mode = AmplitudeMode::Multiplicative;
  if (cfg.sweep) {
    windows = cfg.sweep->windows;
    mode = cfg.sweep->amplitude_mode;
  } else {
    windows = default_windows(cfg.scenario);
  }
  for (const AxisWindow& w : windows) {
    if (w.axis == SweepAxis::Duration) throw ConfigError("axis", "compare uses amplitude and detuning axes only");
  }
  const ComparisonTable table = compare_protocols(cfg.scenario, durations, windows, mode);

  fs::create_directories(opt.out);
  write_parameters(opt, cfg);
  {
    auto f = open_output(opt, cfg, "compare_rows.csv");
    for (std::size_t i = 0; i < table.sweeps.size(); ++i) write_sweep_csv(f, table.sweeps[i], i == 0);
  }
  {
    auto f = open_output(opt, cfg, "compare_summary.csv");
    write_summary_csv(f, table);
  }
  {
    auto f = open_output(opt, cfg, "compare_dominance.csv");
    write_dominance_csv(f, table);
  }
  if (opt.plot) {
    for (const SweepResult& s : table.sweeps) plot_sweep(opt, cfg, s, "compare");
  }
  print_comparison(std::cout, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic and shortcut population-transfer simulator"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "config file (key = value, optional [sweep] section)")->required();
    sub->add_option("--out", opt.out, "output directory");
  };
  auto* simulate = app.add_subcommand("simulate", "single run, prints fidelity, error and norm");
  add_common(simulate);
  simulate->add_flag("--trajectory", opt.trajectory, "also write trajectory.csv");
  simulate->add_flag("--schedule", opt.schedule, "also write the sampled control schedule");
  simulate->add_flag("--plot", opt.plot, "accepted for symmetry; simulate has no plot");
  auto* sweep = app.add_subcommand("sweep", "scan one or more axes for every protocol");
  add_common(sweep);
  sweep->add_flag("--plot", opt.plot, "write an SVG chart per axis");
  sweep->add_flag("--trajectory", opt.trajectory, "ignored by sweep");
  auto* compare = app.add_subcommand("compare", "robustness comparison and dominance summary");
  add_common(compare);
  compare->add_flag("--plot", opt.plot, "write an SVG chart per axis");
  compare->add_flag("--trajectory", opt.trajectory, "ignored by compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = load_config_file(opt.config);
    if (simulate->parsed()) return cmd_simulate(opt, cfg);
    if (sweep->parsed()) return cmd_sweep(opt, cfg);
    return cmd_compare(opt, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
