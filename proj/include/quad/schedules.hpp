#ifndef QUAD_SCHEDULES_HPP
#define QUAD_SCHEDULES_HPP

#include "quad/core_model.hpp"

#include <cmath>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quad {

enum class Protocol { Siquad, Faquad, Linear, FlatPi, Stirap, Sampled };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

/// True for protocols that sweep delta from -delta_m to +delta_m.
constexpr bool is_detuning_sweep(Protocol p) {
  return p == Protocol::Siquad || p == Protocol::Faquad || p == Protocol::Linear;
}

namespace detail {
template <typename Scalar>
void check_time(Scalar t, Scalar duration) {
  if (!(duration > 0)) throw std::invalid_argument("schedule duration must be > 0");
  if (!(t >= 0 && t <= duration)) throw std::domain_error("schedule time outside [0, T]");
}
}  // namespace detail

// Closed-form detuning ramps. All arguments in seconds and rad/s.

/// delta(t) = omega tan[(2t/T - 1) arctan(delta_m / omega)], which holds
/// s' = (1/2) d(delta)/dt / (delta^2 + omega^2) fixed.
template <typename Scalar>
Scalar siquad_delta(Scalar t, Scalar duration, Scalar delta_m, Scalar omega) {
  using std::atan;
  using std::tan;
  detail::check_time(t, duration);
  if (!(omega > 0) || !(delta_m > 0)) throw std::invalid_argument("siquad_delta: omega and delta_m must be > 0");
  return omega * tan((2 * t / duration - 1) * atan(delta_m / omega));
}

template <typename Scalar>
Scalar siquad_delta_rate(Scalar t, Scalar duration, Scalar delta_m, Scalar omega) {
  using std::atan;
  const Scalar d = siquad_delta(t, duration, delta_m, omega);
  return 2 * atan(delta_m / omega) / (duration * omega) * (d * d + omega * omega);
}

/// The constant value of s' along siquad_delta.
template <typename Scalar>
Scalar siquad_sprime_value(Scalar duration, Scalar delta_m, Scalar omega) {
  using std::atan;
  if (!(duration > 0) || !(omega > 0)) throw std::invalid_argument("siquad_sprime_value: T and omega must be > 0");
  return atan(delta_m / omega) / (duration * omega);
}

namespace detail {
// u(t) = (2t/T - 1) u_m with u_m = delta_m / sqrt(delta_m^2 + omega^2).
// Returns (u, 1 - u^2) with 1 - u^2 formed without cancellation near |u| -> 1.
template <typename Scalar>
std::pair<Scalar, Scalar> faquad_u(Scalar t, Scalar duration, Scalar delta_m, Scalar omega) {
  using std::hypot;
  const Scalar r = hypot(delta_m, omega);
  const Scalar u_m = delta_m / r;
  const Scalar one_minus_um = omega * omega / (r * (r + delta_m));
  const Scalar xi = 2 * t / duration - 1;
  const Scalar u = xi * u_m;
  const Scalar one_minus_u = one_minus_um + (1 - xi) * u_m;
  const Scalar one_plus_u = one_minus_um + (1 + xi) * u_m;
  const Scalar w = one_minus_u * one_plus_u;
  if (!(w > 0)) throw std::domain_error("faquad_delta: |u| >= 1");
  return {u, w};
}
}  // namespace detail

/// Constant-s schedule: delta = omega u / sqrt(1 - u^2), u linear in t.
template <typename Scalar>
Scalar faquad_delta(Scalar t, Scalar duration, Scalar delta_m, Scalar omega) {
  using std::sqrt;
  detail::check_time(t, duration);
  if (!(omega > 0) || !(delta_m > 0)) throw std::invalid_argument("faquad_delta: omega and delta_m must be > 0");
  const auto [u, w] = detail::faquad_u(t, duration, delta_m, omega);
  return omega * u / sqrt(w);
}

template <typename Scalar>
Scalar faquad_delta_rate(Scalar t, Scalar duration, Scalar delta_m, Scalar omega) {
  using std::hypot;
  using std::sqrt;
  detail::check_time(t, duration);
  const auto [u, w] = detail::faquad_u(t, duration, delta_m, omega);
  const Scalar u_rate = 2 * delta_m / (hypot(delta_m, omega) * duration);
  return omega * u_rate / (w * sqrt(w));
}

template <typename Scalar>
Scalar linear_delta(Scalar t, Scalar duration, Scalar delta_m) {
  detail::check_time(t, duration);
  return delta_m * (2 * t / duration - 1);
}

struct StirapPulses {
  double omega_p;
  double omega_s;
};

/// Counterintuitive Gaussian pair: Stokes centred at (T - tau_sep)/2, pump at
/// (T + tau_sep)/2, both with peak omega0 and width sigma.
StirapPulses stirap_pulses(double t, double duration, double omega0, double tau_sep, double sigma);

/// Standard adiabaticity functional: (1/2) d(delta)/dt omega / (delta^2 + omega^2)^(3/2).
template <typename Scalar>
Scalar adiabaticity_s(Scalar delta, Scalar delta_rate, Scalar omega) {
  using std::sqrt;
  if (!(omega > 0)) throw std::invalid_argument("adiabaticity_s: omega must be > 0");
  const Scalar r2 = delta * delta + omega * omega;
  return delta_rate * omega / (2 * r2 * sqrt(r2));
}

/// Rigorous functional: (1/2) d(delta)/dt / (delta^2 + omega^2). Always >= adiabaticity_s.
template <typename Scalar>
Scalar adiabaticity_sprime(Scalar delta, Scalar delta_rate, Scalar omega) {
  if (!(omega > 0)) throw std::invalid_argument("adiabaticity_sprime: omega must be > 0");
  return delta_rate / (2 * (delta * delta + omega * omega));
}

/// Piecewise-linear control table, e.g. read back from a schedule CSV.
struct SampledTable {
  std::vector<double> t;
  std::vector<double> delta;
  std::vector<double> omega_p;
  std::vector<double> omega_s;

  void validate() const;
};

/// Reads the four-column table written by write_schedule_csv. The first
/// sample must be at t = 0.
SampledTable read_schedule_csv(std::istream& in);
SampledTable read_schedule_csv(const std::string& path);

/// Control schedule over [0, duration].
struct PulseSchedule {
  Protocol kind = Protocol::Siquad;
  double duration = 0.0;
  AngularFrequency delta_m;
  AngularFrequency omega_ref;  // gap entering the adiabaticity functionals
  AngularFrequency omega0;     // constant Raman coupling, or STIRAP peak
  double tau_sep = 0.0;
  double sigma = 0.0;
  std::shared_ptr<const SampledTable> table;

  void validate() const;
};

PulseSchedule make_sweep_schedule(Protocol kind, double duration, AngularFrequency delta_m,
                                  AngularFrequency omega_ref, AngularFrequency omega0 = {});
PulseSchedule make_flat_schedule(double duration, AngularFrequency omega_ref, AngularFrequency omega0 = {});
PulseSchedule make_stirap_schedule(double duration, AngularFrequency omega0, double tau_sep, double sigma,
                                   AngularFrequency omega_ref = {});
PulseSchedule make_sampled_schedule(std::shared_ptr<const SampledTable> table, AngularFrequency omega_ref = {});

double schedule_delta(const PulseSchedule& s, double t);
ControlValues evaluate(const PulseSchedule& s, double t);

/// d(delta)/dt: analytic for the closed-form ramps, central difference with
/// step 1e-6 T otherwise (one-sided within one step of either end).
double delta_derivative(const PulseSchedule& s, double t);

struct AdiabaticitySample {
  double t;
  double s;
  double s_prime;
};

struct AdiabaticityReport {
  std::vector<AdiabaticitySample> samples;
  double max_s = 0.0;
  double max_s_prime = 0.0;
};

AdiabaticityReport adiabaticity_report(const PulseSchedule& s, std::size_t samples);

/// Instantaneous-eigenbasis Hamiltonian H~ = i dV^dagger/dt V + V^dagger H V
/// for the symmetric two-level form, with V = (phi_plus, phi_minus).
struct RotatingFrameCheck {
  Matrix2<double> h_tilde;
  double diag_gap;           // |H~_11 - H~_22|, equals 2 E_plus
  double offdiag_coupling;   // |H~_12|, equals |d theta/dt| / 2
};

RotatingFrameCheck rotating_frame_check(double delta, double delta_rate, double omega);

/// Table with columns t_s, delta_rad_s, omega_p_rad_s, omega_s_rad_s.
void write_schedule_csv(std::ostream& out, const PulseSchedule& s, std::size_t samples);

}  // namespace quad

#endif  // QUAD_SCHEDULES_HPP
