#include "quad/schedules.hpp"

#include "quad/csv.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace quad {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Siquad: return "siquad";
    case Protocol::Faquad: return "faquad";
    case Protocol::Linear: return "linear";
    case Protocol::FlatPi: return "pi";
    case Protocol::Stirap: return "stirap";
    case Protocol::Sampled: return "sampled";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& name) {
  for (Protocol p : {Protocol::Siquad, Protocol::Faquad, Protocol::Linear, Protocol::FlatPi, Protocol::Stirap,
                     Protocol::Sampled}) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown protocol '" + name + "'");
}

StirapPulses stirap_pulses(double t, double duration, double omega0, double tau_sep, double sigma) {
  if (!(sigma > 0)) throw std::invalid_argument("stirap_pulses: sigma must be > 0");
  if (!(tau_sep > 0 && tau_sep < duration)) throw std::invalid_argument("stirap_pulses: need 0 < tau_sep < T");
  const double stokes_centre = (duration - tau_sep) / 2;
  const double pump_centre = (duration + tau_sep) / 2;
  const double two_sigma_sq = 2 * sigma * sigma;
  return {omega0 * std::exp(-(t - pump_centre) * (t - pump_centre) / two_sigma_sq),
          omega0 * std::exp(-(t - stokes_centre) * (t - stokes_centre) / two_sigma_sq)};
}

void SampledTable::validate() const {
  const std::size_t n = t.size();
  if (n < 2) throw std::invalid_argument("sampled schedule needs at least two rows");
  if (delta.size() != n || omega_p.size() != n || omega_s.size() != n) {
    throw std::invalid_argument("sampled schedule columns differ in length");
  }
  if (t.front() != 0.0) throw std::invalid_argument("sampled schedule must start at t = 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("sampled schedule times must increase strictly");
  }
}

SampledTable read_schedule_csv(std::istream& in) {
  SampledTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("schedule table: empty input");
  const auto header = csv::split(line);
  const std::vector<std::string> expected{"t_s", "delta_rad_s", "omega_p_rad_s", "omega_s_rad_s"};
  if (header.size() != expected.size() || !std::equal(header.begin(), header.end(), expected.begin(),
                                                      [](const auto& a, const auto& b) { return csv::trim(a) == b; })) {
    throw std::invalid_argument("schedule table: header must be t_s,delta_rad_s,omega_p_rad_s,omega_s_rad_s");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (csv::trim(line).empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != 4) throw std::invalid_argument("schedule table: row " + std::to_string(row) + " needs 4 cells");
    double v[4];
    for (int i = 0; i < 4; ++i) {
      try {
        std::size_t pos = 0;
        const std::string cell = csv::trim(cells[i]);
        v[i] = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("schedule table: bad number at row " + std::to_string(row));
      }
    }
    table.t.push_back(v[0]);
    table.delta.push_back(v[1]);
    table.omega_p.push_back(v[2]);
    table.omega_s.push_back(v[3]);
  }
  table.validate();
  return table;
}

SampledTable read_schedule_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open schedule table '" + path + "'");
  return read_schedule_csv(in);
}

void PulseSchedule::validate() const {
  if (!(duration > 0)) throw std::invalid_argument("schedule duration must be > 0");
  if (is_detuning_sweep(kind)) {
    if (!(delta_m.rad_per_s() > 0)) throw std::invalid_argument("sweep schedule needs delta_m > 0");
    if (kind != Protocol::Linear && !(omega_ref.rad_per_s() > 0)) {
      throw std::invalid_argument("sweep schedule needs a positive reference gap");
    }
  }
  if (kind == Protocol::Stirap) {
    if (!(sigma > 0)) throw std::invalid_argument("STIRAP sigma must be > 0");
    if (!(tau_sep > 0 && tau_sep < duration)) throw std::invalid_argument("STIRAP needs 0 < tau_sep < T");
  }
  if (kind == Protocol::Sampled) {
    if (!table) throw std::invalid_argument("sampled schedule without a table");
    table->validate();
  }
}

PulseSchedule make_sweep_schedule(Protocol kind, double duration, AngularFrequency delta_m, AngularFrequency omega_ref,
                                  AngularFrequency omega0) {
  if (!is_detuning_sweep(kind)) throw std::invalid_argument("make_sweep_schedule: not a sweep protocol");
  PulseSchedule s;
  s.kind = kind;
  s.duration = duration;
  s.delta_m = delta_m;
  s.omega_ref = omega_ref;
  s.omega0 = omega0;
  s.validate();
  return s;
}

PulseSchedule make_flat_schedule(double duration, AngularFrequency omega_ref, AngularFrequency omega0) {
  PulseSchedule s;
  s.kind = Protocol::FlatPi;
  s.duration = duration;
  s.omega_ref = omega_ref;
  s.omega0 = omega0;
  s.validate();
  return s;
}

PulseSchedule make_stirap_schedule(double duration, AngularFrequency omega0, double tau_sep, double sigma,
                                   AngularFrequency omega_ref) {
  PulseSchedule s;
  s.kind = Protocol::Stirap;
  s.duration = duration;
  s.omega0 = omega0;
  s.omega_ref = omega_ref;
  s.tau_sep = tau_sep;
  s.sigma = sigma;
  s.validate();
  return s;
}

PulseSchedule make_sampled_schedule(std::shared_ptr<const SampledTable> table, AngularFrequency omega_ref) {
  if (!table) throw std::invalid_argument("make_sampled_schedule: null table");
  PulseSchedule s;
  s.kind = Protocol::Sampled;
  s.duration = table->t.back();
  s.omega_ref = omega_ref;
  s.table = std::move(table);
  s.validate();
  return s;
}

namespace {

ControlValues interpolate(const SampledTable& tab, double t) {
  const auto it = std::upper_bound(tab.t.begin(), tab.t.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - tab.t.begin());
  if (hi == 0) hi = 1;
  if (hi >= tab.t.size()) hi = tab.t.size() - 1;
  const std::size_t lo = hi - 1;
  const double w = (t - tab.t[lo]) / (tab.t[hi] - tab.t[lo]);
  auto lerp = [&](const std::vector<double>& col) { return col[lo] + w * (col[hi] - col[lo]); };
  return {lerp(tab.delta), lerp(tab.omega_p), lerp(tab.omega_s)};
}

}  // namespace

double schedule_delta(const PulseSchedule& s, double t) {
  const double dm = s.delta_m.rad_per_s();
  const double w = s.omega_ref.rad_per_s();
  switch (s.kind) {
    case Protocol::Siquad: return siquad_delta(t, s.duration, dm, w);
    case Protocol::Faquad: return faquad_delta(t, s.duration, dm, w);
    case Protocol::Linear: return linear_delta(t, s.duration, dm);
    case Protocol::FlatPi:
    case Protocol::Stirap:
      detail::check_time(t, s.duration);
      return 0.0;
    case Protocol::Sampled:
      detail::check_time(t, s.duration);
      return interpolate(*s.table, t).delta;
  }
  throw std::logic_error("unreachable");
}

ControlValues evaluate(const PulseSchedule& s, double t) {
  switch (s.kind) {
    case Protocol::Stirap: {
      detail::check_time(t, s.duration);
      const auto pulses = stirap_pulses(t, s.duration, s.omega0.rad_per_s(), s.tau_sep, s.sigma);
      return {0.0, pulses.omega_p, pulses.omega_s};
    }
    case Protocol::Sampled:
      detail::check_time(t, s.duration);
      return interpolate(*s.table, t);
    default: {
      const double w0 = s.omega0.rad_per_s();
      return {schedule_delta(s, t), w0, w0};
    }
  }
}

double delta_derivative(const PulseSchedule& s, double t) {
  const double dm = s.delta_m.rad_per_s();
  const double w = s.omega_ref.rad_per_s();
  switch (s.kind) {
    case Protocol::Siquad: return siquad_delta_rate(t, s.duration, dm, w);
    case Protocol::Faquad: return faquad_delta_rate(t, s.duration, dm, w);
    case Protocol::Linear:
      detail::check_time(t, s.duration);
      return 2 * dm / s.duration;
    default: break;
  }
  detail::check_time(t, s.duration);
  const double h = s.duration * 1e-6;
  if (t - h < 0) return (schedule_delta(s, t + h) - schedule_delta(s, t)) / h;
  if (t + h > s.duration) return (schedule_delta(s, t) - schedule_delta(s, t - h)) / h;
  return (schedule_delta(s, t + h) - schedule_delta(s, t - h)) / (2 * h);
}

AdiabaticityReport adiabaticity_report(const PulseSchedule& s, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("adiabaticity_report: need at least two samples");
  const double w = s.omega_ref.rad_per_s();
  AdiabaticityReport report;
  report.samples.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = s.duration * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double d = schedule_delta(s, t);
    const double rate = delta_derivative(s, t);
    AdiabaticitySample a{t, adiabaticity_s(d, rate, w), adiabaticity_sprime(d, rate, w)};
    report.max_s = std::max(report.max_s, a.s);
    report.max_s_prime = std::max(report.max_s_prime, a.s_prime);
    report.samples.push_back(a);
  }
  return report;
}

RotatingFrameCheck rotating_frame_check(double delta, double delta_rate, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("rotating_frame_check: omega must be > 0");
  auto frame = [omega](double d) {
    const Eigensystem2 es = lz_eigensystem(d, omega);
    Matrix2<double> v;
    v.col(0) = es.phi_plus.cast<Complex>();
    v.col(1) = es.phi_minus.cast<Complex>();
    return v;
  };
  // V depends on t only through delta: dV/dt = dV/d(delta) * d(delta)/dt.
  // Richardson-extrapolated central difference, O(h^4).
  const double h = 1e-3 * std::hypot(delta, omega);
  auto central = [&](double step) { return Matrix2<double>((frame(delta + step) - frame(delta - step)) / (2 * step)); };
  const Matrix2<double> v = frame(delta);
  const Matrix2<double> dv = (4.0 * central(h / 2) - central(h)) / 3.0 * delta_rate;
  const Matrix2<double> hamiltonian = lz_hamiltonian(delta, omega);
  const Complex i(0, 1);

  RotatingFrameCheck out;
  out.h_tilde = i * dv.adjoint() * v + v.adjoint() * hamiltonian * v;
  out.diag_gap = std::abs(out.h_tilde(0, 0) - out.h_tilde(1, 1));
  out.offdiag_coupling = std::abs(out.h_tilde(0, 1));
  return out;
}

void write_schedule_csv(std::ostream& out, const PulseSchedule& s, std::size_t samples) {
  if (samples < 2) throw std::invalid_argument("write_schedule_csv: need at least two samples");
  out << "t_s,delta_rad_s,omega_p_rad_s,omega_s_rad_s\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = s.duration * static_cast<double>(i) / static_cast<double>(samples - 1);
    const ControlValues c = evaluate(s, t);
    out << csv::join({csv::number(t), csv::number(c.delta), csv::number(c.omega_p), csv::number(c.omega_s)});
  }
}

}  // namespace quad
