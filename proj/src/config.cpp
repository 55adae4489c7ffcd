#include "quad/config.hpp"

#include "quad/csv.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <istream>
#include <set>

namespace quad {

RawConfig parse_raw_config(std::istream& in) {
  RawConfig raw;
  std::set<std::string> seen_top, seen_sweep;
  bool in_sweep = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = csv::trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text != "[sweep]") throw ConfigError(text, "unknown section on line " + std::to_string(lineno));
      if (raw.has_sweep) throw ConfigError("[sweep]", "section given twice");
      raw.has_sweep = true;
      in_sweep = true;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    std::string key = csv::trim(std::string_view(text).substr(0, eq));
    std::string value = csv::trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (value.empty()) throw ConfigError(key, "empty value");
    auto& seen = in_sweep ? seen_sweep : seen_top;
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    (in_sweep ? raw.sweep : raw.top).emplace_back(std::move(key), std::move(value));
  }
  return raw;
}

namespace {

class KeyTable {
 public:
  explicit KeyTable(const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [k, v] : entries) values_[k] = v;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::optional<std::string> text(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::optional<double> number(const std::string& key) {
    const auto t = text(key);
    if (!t) return std::nullopt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(*t, &pos);
      if (pos != t->size() || !std::isfinite(v)) throw std::invalid_argument("x");
      return v;
    } catch (const std::exception&) {
      throw ConfigError(key, "not a finite number: '" + *t + "'");
    }
  }

  double required_number(const std::string& key, const std::string& why) {
    const auto v = number(key);
    if (!v) throw ConfigError(key, "missing (required " + why + ")");
    return *v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    const auto v = number(key);
    if (!v) return std::nullopt;
    if (*v < 1 || *v != std::floor(*v) || *v > 1e12) throw ConfigError(key, "must be a positive integer");
    return static_cast<std::size_t>(*v);
  }

  void reject_unused(const std::string& where) const {
    for (const auto& [k, v] : values_) {
      if (!used_.count(k)) throw ConfigError(k, "unknown key" + where);
    }
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& item : csv::split(s)) {
    const std::string t = csv::trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

AngularFrequency positive_hz(KeyTable& keys, const std::string& key, const std::string& why) {
  const double v = keys.required_number(key, why);
  if (!(v > 0)) throw ConfigError(key, "must be > 0");
  return AngularFrequency::from_hz(v);
}

// Resolves T_s / T_tau_pi style pairs. Both present is a conflict.
std::optional<double> duration_pair(KeyTable& keys, const std::string& seconds_key, const std::string& tau_key,
                                    double tau_pi) {
  const bool has_s = keys.has(seconds_key);
  const bool has_tau = keys.has(tau_key);
  if (has_s && has_tau) throw ConfigError(seconds_key, "conflicts with " + tau_key);
  std::optional<double> t;
  if (has_s) t = keys.number(seconds_key);
  if (has_tau) t = *keys.number(tau_key) * tau_pi;
  if (t && !(*t > 0)) throw ConfigError(has_s ? seconds_key : tau_key, "duration must be > 0");
  return t;
}

}  // namespace

std::vector<AxisWindow> default_windows(const Scenario& scenario) {
  const double gap = scenario.gap().rad_per_s();
  return {{SweepAxis::AmplitudeScale, 0.8, 1.2, 41}, {SweepAxis::DetuningOffset, -gap, gap, 41}};
}

RunConfig load_config(std::istream& in, const std::string& base_dir) {
  RunConfig cfg;
  cfg.raw = parse_raw_config(in);
  KeyTable keys(cfg.raw.top);
  Scenario& sc = cfg.scenario;

  const auto scenario_name = keys.text("scenario");
  if (!scenario_name) throw ConfigError("scenario", "missing (two_level or three_level)");
  try {
    sc.kind = scenario_from_string(*scenario_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario", e.what());
  }
  const bool two = sc.kind == ScenarioKind::TwoLevel;

  if (keys.has("protocol") && keys.has("protocols")) throw ConfigError("protocol", "conflicts with protocols");
  const auto protocol_text = keys.has("protocol") ? keys.text("protocol") : keys.text("protocols");
  if (!protocol_text) throw ConfigError("protocol", "missing");
  for (const std::string& name : split_list(*protocol_text)) {
    Protocol p;
    try {
      p = protocol_from_string(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(keys.has("protocol") ? "protocol" : "protocols", e.what());
    }
    if (std::find(cfg.protocols.begin(), cfg.protocols.end(), p) != cfg.protocols.end()) {
      throw ConfigError("protocols", "lists " + name + " twice");
    }
    cfg.protocols.push_back(p);
  }
  if (cfg.protocols.empty()) throw ConfigError("protocol", "empty list");

  if (two) {
    sc.omega_m = positive_hz(keys, "omega_m_hz", "for two_level");
    for (const char* k : {"omega0_hz", "delta_big_hz", "gamma_hz"}) {
      if (keys.has(k)) throw ConfigError(k, "only valid for three_level");
    }
  } else {
    sc.omega0 = positive_hz(keys, "omega0_hz", "for three_level");
    sc.delta_big = positive_hz(keys, "delta_big_hz", "for three_level");
    const double gamma = keys.required_number("gamma_hz", "for three_level");
    if (gamma < 0) throw ConfigError("gamma_hz", "must be >= 0");
    sc.gamma = AngularFrequency::from_hz(gamma);
    if (const auto wm = keys.number("omega_m_hz")) {
      if (*wm < 0) throw ConfigError("omega_m_hz", "must be >= 0");
      sc.omega_m = AngularFrequency::from_hz(*wm);
    }
  }

  const bool needs_delta_m = std::any_of(cfg.protocols.begin(), cfg.protocols.end(), is_detuning_sweep);
  if (needs_delta_m) {
    sc.delta_m = positive_hz(keys, "delta_m_hz", "for siquad, faquad and linear");
  } else if (const auto dm = keys.number("delta_m_hz")) {
    if (!(*dm > 0)) throw ConfigError("delta_m_hz", "must be > 0");
    sc.delta_m = AngularFrequency::from_hz(*dm);
  }

  for (Protocol p : cfg.protocols) {
    if (p == Protocol::Stirap && two) throw ConfigError("protocols", "stirap needs scenario = three_level");
  }

  sc.steps = keys.count("steps").value_or(two ? 100000 : 500000);
  if (sc.steps < 10) throw ConfigError("steps", "must be >= 10");
  if (const auto m = keys.text("method")) {
    try {
      sc.method = method_from_string(*m);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("method", e.what());
    }
  }
  if (const auto v = keys.number("stirap_sigma_frac")) {
    if (!(*v > 0)) throw ConfigError("stirap_sigma_frac", "must be > 0");
    sc.stirap_sigma_frac = *v;
  }
  if (const auto v = keys.number("stirap_tau_sep_frac")) {
    if (!(*v > 0 && *v < 1)) throw ConfigError("stirap_tau_sep_frac", "must lie in (0, 1)");
    sc.stirap_tau_sep_frac = *v;
  }

  const bool sampled = std::count(cfg.protocols.begin(), cfg.protocols.end(), Protocol::Sampled) > 0;
  if (const auto path = keys.text("schedule_table")) {
    std::filesystem::path p(*path);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    try {
      sc.table = std::make_shared<const SampledTable>(read_schedule_csv(p.string()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("schedule_table", e.what());
    }
  } else if (sampled) {
    throw ConfigError("schedule_table", "missing (required for protocol sampled)");
  }

  if (const auto v = keys.count("trajectory_stride")) cfg.trajectory_stride = *v;
  if (const auto v = keys.text("output_prefix")) cfg.output_prefix = *v;

  double tau_pi = 0.0;
  try {
    tau_pi = sc.tau_pi();
  } catch (const std::invalid_argument&) {
    tau_pi = 0.0;
  }
  const auto global = duration_pair(keys, "T_s", "T_tau_pi", tau_pi);
  for (Protocol p : cfg.protocols) {
    if (p == Protocol::Sampled) {
      cfg.durations[p] = sc.table->t.back();
      continue;
    }
    const std::string name = to_string(p);
    const auto own = duration_pair(keys, "T_" + name + "_s", "T_" + name + "_tau_pi", tau_pi);
    if (own) {
      cfg.durations[p] = *own;
    } else if (global) {
      cfg.durations[p] = *global;
    }
  }
  // Per-protocol keys for protocols that are not selected are unknown keys.
  keys.reject_unused("");

  if (cfg.raw.has_sweep) {
    KeyTable sk(cfg.raw.sweep);
    SweepSettings settings;
    if (const auto mode = sk.text("amplitude_mode")) {
      if (*mode == "multiplicative") {
        settings.amplitude_mode = AmplitudeMode::Multiplicative;
      } else if (*mode == "additive") {
        settings.amplitude_mode = AmplitudeMode::Additive;
      } else {
        throw ConfigError("amplitude_mode", "expected multiplicative or additive");
      }
    }
    const std::string duration_unit = sk.text("duration_unit").value_or("s");
    if (duration_unit != "s" && duration_unit != "tau_pi") throw ConfigError("duration_unit", "expected s or tau_pi");
    const std::string detuning_unit = sk.text("detuning_unit").value_or("hz");
    if (detuning_unit != "hz" && detuning_unit != "gap") throw ConfigError("detuning_unit", "expected hz or gap");

    const auto axis_text = sk.text("axis");
    if (!axis_text) throw ConfigError("axis", "missing in [sweep]");
    const auto axis_names = split_list(*axis_text);
    if (axis_names.empty()) throw ConfigError("axis", "empty list");
    const bool single = axis_names.size() == 1;
    if (!single) {
      for (const char* k : {"lo", "hi", "points"}) {
        if (sk.has(k)) throw ConfigError(k, "ambiguous with several axes; use <axis>_" + std::string(k));
      }
    }

    for (const std::string& name : axis_names) {
      AxisWindow w{};
      try {
        w.axis = axis_from_string(name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("axis", e.what());
      }
      auto pick = [&](const std::string& field) -> std::optional<double> {
        const std::string specific = name + "_" + field;
        if (single && sk.has(field) && sk.has(specific)) throw ConfigError(specific, "conflicts with " + field);
        if (sk.has(specific)) return sk.number(specific);
        if (single && sk.has(field)) return sk.number(field);
        return std::nullopt;
      };
      const auto lo = pick("lo");
      const auto hi = pick("hi");
      const std::string points_key = single && sk.has("points") ? "points" : name + "_points";
      w.points = sk.count(points_key).value_or(41);
      if (lo.has_value() != hi.has_value()) throw ConfigError(name + "_lo", "lo and hi must be given together");

      double unit = 1.0;
      switch (w.axis) {
        case SweepAxis::Duration:
          if (!lo) throw ConfigError("lo", "duration axis needs lo and hi");
          unit = duration_unit == "tau_pi" ? sc.tau_pi() : 1.0;
          break;
        case SweepAxis::DetuningOffset:
          unit = detuning_unit == "gap" ? sc.gap().rad_per_s() : 2 * std::numbers::pi;
          break;
        case SweepAxis::AmplitudeScale:
          unit = settings.amplitude_mode == AmplitudeMode::Additive ? 2 * std::numbers::pi : 1.0;
          break;
      }
      if (lo) {
        w.lo = *lo * unit;
        w.hi = *hi * unit;
      } else if (w.axis == SweepAxis::DetuningOffset) {
        w.lo = -sc.gap().rad_per_s();
        w.hi = sc.gap().rad_per_s();
      } else if (settings.amplitude_mode == AmplitudeMode::Additive) {
        w.lo = -0.2 * sc.reference_coupling().rad_per_s();
        w.hi = 0.2 * sc.reference_coupling().rad_per_s();
      } else {
        w.lo = 0.8;
        w.hi = 1.2;
      }
      const bool degenerate = w.points == 1 && w.lo == w.hi;
      if (!degenerate && !(w.lo < w.hi)) throw ConfigError(name + "_lo", "must be below hi");
      if (w.axis == SweepAxis::AmplitudeScale && settings.amplitude_mode == AmplitudeMode::Multiplicative &&
          !(w.lo > 0 && w.hi <= 2)) {
        throw ConfigError(name + "_lo", "amplitude scale window must lie in (0, 2]");
      }
      if (w.axis == SweepAxis::Duration && w.lo < 0) throw ConfigError("lo", "durations must be >= 0");
      settings.windows.push_back(w);
    }
    sk.reject_unused(" in [sweep]");
    cfg.sweep = std::move(settings);
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  const auto parent = std::filesystem::path(path).parent_path();
  return load_config(in, parent.empty() ? "." : parent.string());
}

}  // namespace quad
