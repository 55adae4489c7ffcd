#ifndef QUAD_CONFIG_HPP
#define QUAD_CONFIG_HPP

#include "quad/sweeps.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quad {

/// Raised for malformed, missing, unknown, or conflicting keys. what()
/// names the key involved.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// `key = value` lines, `#` comments, and at most one `[sweep]` section.
struct RawConfig {
  std::vector<std::pair<std::string, std::string>> top;
  std::vector<std::pair<std::string, std::string>> sweep;
  bool has_sweep = false;
};

RawConfig parse_raw_config(std::istream& in);

struct SweepSettings {
  std::vector<AxisWindow> windows;
  AmplitudeMode amplitude_mode = AmplitudeMode::Multiplicative;
};

/// Validated run description. Frequencies are converted from Hz exactly once here.
struct RunConfig {
  Scenario scenario;
  std::vector<Protocol> protocols;
  std::map<Protocol, double> durations;  // seconds; absent when no duration key applies
  std::optional<SweepSettings> sweep;
  std::size_t trajectory_stride = 1;
  std::string output_prefix;
  RawConfig raw;
};

/// `base_dir` resolves a relative schedule_table path.
RunConfig load_config(std::istream& in, const std::string& base_dir = ".");
RunConfig load_config_file(const std::string& path);

/// Sweep windows for the configured axes, with defaults filled in:
/// amplitude_scale [0.8, 1.2], detuning_offset [-gap, +gap], 41 points.
std::vector<AxisWindow> default_windows(const Scenario& scenario);

}  // namespace quad

#endif  // QUAD_CONFIG_HPP
