#include "quad/sweeps.hpp"

#include "quad/csv.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <ostream>
#include <thread>

namespace quad {

std::string to_string(ScenarioKind k) { return k == ScenarioKind::TwoLevel ? "two_level" : "three_level"; }

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Duration: return "duration";
    case SweepAxis::AmplitudeScale: return "amplitude_scale";
    case SweepAxis::DetuningOffset: return "detuning_offset";
  }
  return "?";
}

ScenarioKind scenario_from_string(const std::string& s) {
  if (s == "two_level") return ScenarioKind::TwoLevel;
  if (s == "three_level") return ScenarioKind::ThreeLevel;
  throw std::invalid_argument("unknown scenario '" + s + "' (expected two_level or three_level)");
}

SweepAxis axis_from_string(const std::string& s) {
  for (SweepAxis a : {SweepAxis::Duration, SweepAxis::AmplitudeScale, SweepAxis::DetuningOffset}) {
    if (to_string(a) == s) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

LambdaParams Scenario::lambda_params() const { return {omega0, omega0, omega_m, delta_big, gamma}; }

HamiltonianModel Scenario::model() const {
  if (kind == ScenarioKind::TwoLevel) return HamiltonianModel::two_level({omega_m});
  return HamiltonianModel::lambda(lambda_params());
}

AngularFrequency Scenario::gap() const {
  return kind == ScenarioKind::TwoLevel ? omega_m : three_level_gap(lambda_params());
}

AngularFrequency Scenario::reference_coupling() const {
  return kind == ScenarioKind::TwoLevel ? omega_m : omega0;
}

double Scenario::tau_pi() const { return pi_time(gap()); }

PulseSchedule Scenario::schedule(Protocol p, double duration) const {
  const AngularFrequency raman = kind == ScenarioKind::TwoLevel ? AngularFrequency{} : omega0;
  switch (p) {
    case Protocol::Siquad:
    case Protocol::Faquad:
    case Protocol::Linear:
      return make_sweep_schedule(p, duration, delta_m, gap(), raman);
    case Protocol::FlatPi:
      return make_flat_schedule(duration, gap(), raman);
    case Protocol::Stirap:
      if (kind == ScenarioKind::TwoLevel) throw std::invalid_argument("STIRAP needs the three-level scenario");
      return make_stirap_schedule(duration, omega0, stirap_tau_sep_frac * duration, stirap_sigma_frac * duration,
                                  gap());
    case Protocol::Sampled:
      return make_sampled_schedule(table, gap());
  }
  throw std::logic_error("unreachable");
}

EvolveRequest Scenario::request(Protocol p, double duration, Perturbation perturbation) const {
  EvolveRequest req(model(), schedule(p, duration), QuantumState::basis(dimension(), 0));
  req.steps = steps;
  req.method = method;
  req.perturbation = perturbation;
  return req;
}

std::vector<std::pair<std::string, std::string>> Scenario::describe() const {
  std::vector<std::pair<std::string, std::string>> out{
      {"scenario", to_string(kind)},
      {"omega_m_rad_s", csv::number(omega_m.rad_per_s())},
      {"omega0_rad_s", csv::number(omega0.rad_per_s())},
      {"delta_big_rad_s", csv::number(delta_big.rad_per_s())},
      {"delta_m_rad_s", csv::number(delta_m.rad_per_s())},
      {"gamma_rad_s", csv::number(gamma.rad_per_s())},
      {"gap_rad_s", csv::number(gap().rad_per_s())},
      {"steps", std::to_string(steps)},
      {"method", to_string(method)},
      {"stirap_sigma_frac", csv::number(stirap_sigma_frac)},
      {"stirap_tau_sep_frac", csv::number(stirap_tau_sep_frac)},
  };
  return out;
}

void SweepSpec::validate() const {
  if (protocols.empty()) throw std::invalid_argument("sweep: no protocols");
  const bool single = points == 1 && lo == hi;
  if (!single && !(points >= 2 && lo < hi)) throw std::invalid_argument("sweep: need lo < hi and points >= 2");
  if (axis == SweepAxis::AmplitudeScale && amplitude_mode == AmplitudeMode::Multiplicative &&
      !(lo > 0 && hi <= 2)) {
    throw std::invalid_argument("sweep: amplitude scale range must lie in (0, 2]");
  }
  if (axis == SweepAxis::AmplitudeScale && amplitude_mode == AmplitudeMode::Additive &&
      !(lo > -scenario.reference_coupling().rad_per_s())) {
    throw std::invalid_argument("sweep: additive amplitude error would make the coupling negative");
  }
  if (axis == SweepAxis::Duration) {
    if (lo < 0) throw std::invalid_argument("sweep: durations must be >= 0");
    if (std::count(protocols.begin(), protocols.end(), Protocol::Sampled)) {
      throw std::invalid_argument("sweep: a sampled schedule has a fixed duration");
    }
  } else {
    for (Protocol p : protocols) {
      if (p == Protocol::Sampled) continue;
      const auto it = durations.find(p);
      if (it == durations.end() || !(it->second > 0)) {
        throw std::invalid_argument("sweep: missing or non-positive duration for protocol " + to_string(p));
      }
    }
  }
}

std::vector<double> SweepSpec::axis_values() const {
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  v.back() = hi;
  return v;
}

unsigned default_workers() {
  if (const char* env = std::getenv("QUAD_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SweepRow run_point(const SweepSpec& spec, Protocol p, double x) {
  const Scenario& sc = spec.scenario;
  const int target = 1;
  if (spec.axis == SweepAxis::Duration) {
    if (x == 0) {
      // Zero operation time: the state is untouched.
      const QuantumState psi0 = QuantumState::basis(sc.dimension(), 0);
      return {p, x, x, transfer_metrics(psi0, target)};
    }
    const EvolveResult r = evolve(sc.request(p, x));
    return {p, x, x, transfer_metrics(r.final, target)};
  }

  Perturbation perturbation;
  if (spec.axis == SweepAxis::AmplitudeScale) {
    perturbation.amplitude_scale =
        spec.amplitude_mode == AmplitudeMode::Multiplicative
            ? x
            : (sc.reference_coupling().rad_per_s() + x) / sc.reference_coupling().rad_per_s();
  } else {
    perturbation.detuning_offset = x;
  }
  const double duration = p == Protocol::Sampled ? sc.table->t.back() : spec.durations.at(p);
  const EvolveResult r = evolve(sc.request(p, duration, perturbation));
  return {p, x, duration, transfer_metrics(r.final, target)};
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned workers) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> xs = spec.axis_values();
  const std::size_t n = spec.protocols.size() * xs.size();

  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const Protocol p = spec.protocols[i / xs.size()];
      const double x = xs[i % xs.size()];
      try {
        rows[i] = run_point(spec, p, x);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (count == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    const std::string where = "protocol " + to_string(spec.protocols[i / xs.size()]) + ", " + to_string(spec.axis) +
                              " = " + csv::number(xs[i % xs.size()]);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw SweepError("sweep failed at " + where + ": " + e.what());
    }
  }

  SweepResult result{spec.scenario.kind, spec.axis, spec.scenario.method, spec.scenario.steps, std::move(rows),
                     spec.scenario.describe(), 0.0};
  result.parameters.emplace_back("axis", to_string(spec.axis));
  result.parameters.emplace_back("lo", csv::number(spec.lo));
  result.parameters.emplace_back("hi", csv::number(spec.hi));
  result.parameters.emplace_back("points", std::to_string(spec.points));
  result.parameters.emplace_back("amplitude_mode",
                                 spec.amplitude_mode == AmplitudeMode::Multiplicative ? "multiplicative" : "additive");
  for (const auto& [p, t] : spec.durations) result.parameters.emplace_back("T_" + to_string(p) + "_s", csv::number(t));
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, bool header) {
  if (header) out << "protocol,scenario,axis,axis_value,T_s,fidelity,error,final_norm_sq,method,steps\n";
  for (const SweepRow& r : result.rows) {
    out << csv::join({to_string(r.protocol), to_string(result.scenario), to_string(result.axis),
                      csv::number(r.axis_value), csv::number(r.duration), csv::number(r.metrics.fidelity),
                      csv::number(r.metrics.error), csv::number(r.metrics.final_norm_sq), to_string(result.method),
                      std::to_string(result.steps)});
  }
}

double dominance_fraction(const SweepResult& sweep, Protocol a, Protocol b) {
  std::vector<const SweepRow*> ra, rb;
  for (const SweepRow& r : sweep.rows) {
    if (r.protocol == a) ra.push_back(&r);
    if (r.protocol == b) rb.push_back(&r);
  }
  if (ra.empty() || ra.size() != rb.size()) throw std::invalid_argument("dominance_fraction: protocols not paired");
  std::size_t wins = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    if (ra[i]->metrics.error <= rb[i]->metrics.error) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(ra.size());
}

ComparisonTable compare_protocols(const Scenario& scenario, const std::map<Protocol, double>& durations,
                                  const std::vector<AxisWindow>& windows, AmplitudeMode amplitude_mode,
                                  unsigned workers) {
  if (durations.empty()) throw std::invalid_argument("compare: no protocols");
  std::vector<Protocol> protocols;
  for (const auto& [p, t] : durations) protocols.push_back(p);

  ComparisonTable table;
  std::map<Protocol, double> nominal;
  for (Protocol p : protocols) {
    try {
      nominal[p] = transfer_metrics(evolve(scenario.request(p, durations.at(p))).final, 1).error;
    } catch (const IntegrationError& e) {
      throw SweepError("compare failed at protocol " + to_string(p) + " (unperturbed): " + e.what());
    }
  }

  for (const AxisWindow& w : windows) {
    SweepSpec spec;
    spec.scenario = scenario;
    spec.protocols = protocols;
    spec.axis = w.axis;
    spec.lo = w.lo;
    spec.hi = w.hi;
    spec.points = w.points;
    spec.durations = durations;
    spec.amplitude_mode = amplitude_mode;
    SweepResult sweep = run_sweep(spec, workers);

    for (Protocol p : protocols) {
      double worst = 0.0;
      for (const SweepRow& r : sweep.rows) {
        if (r.protocol == p) worst = std::max(worst, r.metrics.error);
      }
      table.summaries.push_back({w.axis, p, durations.at(p), nominal.at(p), worst});
    }
    for (Protocol a : protocols) {
      for (Protocol b : protocols) {
        if (a == b) continue;
        const double f = dominance_fraction(sweep, a, b);
        table.dominance.push_back({w.axis, a, b, f, f >= 0.9});
      }
    }
    table.sweeps.push_back(std::move(sweep));
  }
  return table;
}

void write_summary_csv(std::ostream& out, const ComparisonTable& table) {
  out << "axis,protocol,T_s,nominal_error,worst_error\n";
  for (const ProtocolSummary& s : table.summaries) {
    out << csv::join({to_string(s.axis), to_string(s.protocol), csv::number(s.duration), csv::number(s.nominal_error),
                      csv::number(s.worst_error)});
  }
}

void write_dominance_csv(std::ostream& out, const ComparisonTable& table) {
  out << "axis,protocol_a,protocol_b,fraction,dominates\n";
  for (const Dominance& d : table.dominance) {
    out << csv::join({to_string(d.axis), to_string(d.a), to_string(d.b), csv::number(d.fraction),
                      d.dominates ? "true" : "false"});
  }
}

void print_comparison(std::ostream& out, const ComparisonTable& table) {
  const auto flags = out.flags();
  out << std::left << std::setw(18) << "axis" << std::setw(10) << "protocol" << std::setw(14) << "T_s"
      << std::setw(16) << "nominal_error" << "worst_error\n";
  for (const ProtocolSummary& s : table.summaries) {
    out << std::left << std::setw(18) << to_string(s.axis) << std::setw(10) << to_string(s.protocol)
        << std::setw(14) << std::scientific << std::setprecision(4) << s.duration << std::setw(16) << s.nominal_error
        << s.worst_error << '\n';
  }
  for (const Dominance& d : table.dominance) {
    if (d.dominates) {
      out << to_string(d.a) << " dominates " << to_string(d.b) << " on " << to_string(d.axis) << " ("
          << std::fixed << std::setprecision(3) << d.fraction << ")\n";
    }
  }
  out.flags(flags);
}

}  // namespace quad
