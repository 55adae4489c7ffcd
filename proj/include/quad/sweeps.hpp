#ifndef QUAD_SWEEPS_HPP
#define QUAD_SWEEPS_HPP

#include "quad/analysis.hpp"
#include "quad/propagator.hpp"
#include "quad/schedules.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace quad {

enum class ScenarioKind { TwoLevel, ThreeLevel };
enum class SweepAxis { Duration, AmplitudeScale, DetuningOffset };
enum class AmplitudeMode { Multiplicative, Additive };

std::string to_string(ScenarioKind k);
std::string to_string(SweepAxis a);
ScenarioKind scenario_from_string(const std::string& s);
SweepAxis axis_from_string(const std::string& s);

/// Physical setup shared by every run of a comparison. Transfer is always
/// |1> -> |2>.
struct Scenario {
  ScenarioKind kind = ScenarioKind::TwoLevel;
  AngularFrequency omega_m;
  AngularFrequency omega0;
  AngularFrequency delta_big;
  AngularFrequency delta_m;
  AngularFrequency gamma;
  std::size_t steps = 100000;
  Method method = Method::PiecewiseExpm;
  double stirap_sigma_frac = 1.0 / 8.0;
  double stirap_tau_sep_frac = 1.0 / 5.0;
  std::shared_ptr<const SampledTable> table;

  LambdaParams lambda_params() const;
  HamiltonianModel model() const;
  int dimension() const { return kind == ScenarioKind::TwoLevel ? 2 : 3; }
  /// Gap at delta = 0: omega_m for two levels, three_level_gap otherwise.
  AngularFrequency gap() const;
  /// Amplitude that an additive coupling error is measured against.
  AngularFrequency reference_coupling() const;
  double tau_pi() const;

  PulseSchedule schedule(Protocol p, double duration) const;
  EvolveRequest request(Protocol p, double duration, Perturbation perturbation = {}) const;

  /// Echo of every physical parameter in internal units (rad/s, s).
  std::vector<std::pair<std::string, std::string>> describe() const;
};

struct SweepSpec {
  Scenario scenario;
  std::vector<Protocol> protocols;
  SweepAxis axis = SweepAxis::Duration;
  double lo = 0.0;  // seconds, scale factor, or rad/s (additive amplitude / detuning)
  double hi = 1.0;
  std::size_t points = 41;
  /// Operation time of each protocol for the amplitude and detuning axes.
  std::map<Protocol, double> durations;
  AmplitudeMode amplitude_mode = AmplitudeMode::Multiplicative;

  void validate() const;
  std::vector<double> axis_values() const;
};

struct SweepRow {
  Protocol protocol;
  double axis_value;
  double duration;
  TransferMetrics metrics;
};

struct SweepResult {
  ScenarioKind scenario;
  SweepAxis axis;
  Method method;
  std::size_t steps;
  std::vector<SweepRow> rows;  // protocol-major, axis ascending
  std::vector<std::pair<std::string, std::string>> parameters;
  double wall_time_s = 0.0;
};

class SweepError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

/// Worker count from QUAD_WORKERS, else hardware concurrency (at least 1).
unsigned default_workers();

/// One run per (protocol, axis point). Rows do not depend on `workers`.
SweepResult run_sweep(const SweepSpec& spec, unsigned workers = default_workers());

/// Header: protocol,scenario,axis,axis_value,T_s,fidelity,error,final_norm_sq,method,steps
void write_sweep_csv(std::ostream& out, const SweepResult& result, bool header = true);

struct AxisWindow {
  SweepAxis axis;
  double lo;
  double hi;
  std::size_t points;
};

struct ProtocolSummary {
  SweepAxis axis;
  Protocol protocol;
  double duration;
  double nominal_error;  // unperturbed run
  double worst_error;    // max over the axis window
};

struct Dominance {
  SweepAxis axis;
  Protocol a;
  Protocol b;
  double fraction;  // share of axis points with error_a <= error_b
  bool dominates;   // fraction >= 0.9
};

struct ComparisonTable {
  std::vector<SweepResult> sweeps;  // one per axis window
  std::vector<ProtocolSummary> summaries;
  std::vector<Dominance> dominance;
};

ComparisonTable compare_protocols(const Scenario& scenario, const std::map<Protocol, double>& durations,
                                  const std::vector<AxisWindow>& windows,
                                  AmplitudeMode amplitude_mode = AmplitudeMode::Multiplicative,
                                  unsigned workers = default_workers());

/// Fraction of paired rows where protocol a's error does not exceed b's.
double dominance_fraction(const SweepResult& sweep, Protocol a, Protocol b);

void write_summary_csv(std::ostream& out, const ComparisonTable& table);
void write_dominance_csv(std::ostream& out, const ComparisonTable& table);
void print_comparison(std::ostream& out, const ComparisonTable& table);

}  // namespace quad

#endif  // QUAD_SWEEPS_HPP
