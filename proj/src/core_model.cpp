#include "quad/core_model.hpp"

#include <string>

namespace quad {

QuantumState::QuantumState(StateVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() != 2 && amps_.size() != 3) {
    throw std::invalid_argument("QuantumState: dimension must be 2 or 3, got " + std::to_string(amps_.size()));
  }
  if (!amps_.allFinite()) throw std::invalid_argument("QuantumState: non-finite amplitude");
  if (amps_.squaredNorm() > 1.0 + 1e-9) throw std::invalid_argument("QuantumState: squared norm exceeds 1");
}

QuantumState QuantumState::basis(int dimension, int index) {
  if (index < 0 || index >= dimension) throw std::invalid_argument("QuantumState::basis: index out of range");
  StateVector v = StateVector::Zero(dimension);
  v(index) = 1.0;
  return QuantumState(std::move(v));
}

void validate(const TwoLevelParams& p) {
  if (!(p.omega_m.rad_per_s() > 0)) throw std::invalid_argument("two-level coupling omega_m must be > 0");
}

void validate(const LambdaParams& p) {
  if (p.omega_p0.rad_per_s() < 0 || p.omega_s0.rad_per_s() < 0 || p.omega_m.rad_per_s() < 0) {
    throw std::invalid_argument("Lambda couplings must be non-negative");
  }
  if (p.gamma.rad_per_s() < 0) throw std::invalid_argument("Lambda decay gamma must be >= 0");
}

Eigensystem2 lz_eigensystem(double delta, double omega) {
  if (!std::isfinite(delta) || !std::isfinite(omega)) throw std::invalid_argument("lz_eigensystem: non-finite input");
  if (omega < 0) throw std::invalid_argument("lz_eigensystem: omega must be >= 0");
  if (omega == 0 && delta == 0) throw std::invalid_argument("lz_eigensystem: degenerate point delta = omega = 0");

  const double r = std::hypot(delta, omega);
  // atan2 keeps theta accurate near both ends where arccos loses digits.
  const double theta = std::atan2(omega, -delta);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);

  Eigensystem2 es;
  es.e_plus = r / 2;
  es.e_minus = -r / 2;
  es.theta = theta;
  es.phi_plus << s, c;
  es.phi_minus << c, -s;
  return es;
}

AngularFrequency three_level_gap(const LambdaParams& p) {
  const double d = p.delta_one_photon.rad_per_s();
  const double w0 = p.omega_p0.rad_per_s();
  if (p.omega_p0 != p.omega_s0) throw std::invalid_argument("three_level_gap: requires equal pump and Stokes couplings");
  // sqrt(d^2 + w^2) - d without cancellation.
  const double denom = std::hypot(d, w0) + d;
  if (denom == 0) return AngularFrequency::from_rad_per_s(0.0);
  return AngularFrequency::from_rad_per_s(w0 * w0 / denom);
}

AngularFrequency three_level_gap_exact(const LambdaParams& p) {
  const double d = p.delta_one_photon.rad_per_s();
  const double w0 = p.omega_p0.rad_per_s();
  if (p.omega_p0 != p.omega_s0) throw std::invalid_argument("three_level_gap_exact: requires equal couplings");
  const double denom = std::sqrt(d * d + 2 * w0 * w0) + d;
  if (denom == 0) return AngularFrequency::from_rad_per_s(0.0);
  return AngularFrequency::from_rad_per_s(w0 * w0 / denom);
}

bool far_detuned_regime(const LambdaParams& p, AngularFrequency delta_m) {
  const double gap = three_level_gap(p).rad_per_s();
  return p.delta_one_photon.rad_per_s() >= 100 * delta_m.rad_per_s() && delta_m.rad_per_s() >= 100 * gap;
}

HamiltonianModel HamiltonianModel::two_level(TwoLevelParams p) {
  validate(p);
  HamiltonianModel m;
  m.kind_ = SystemKind::TwoLevel;
  m.dim_ = 2;
  m.two_ = p;
  return m;
}

HamiltonianModel HamiltonianModel::lambda(LambdaParams p) {
  validate(p);
  HamiltonianModel m;
  m.kind_ = SystemKind::Lambda;
  m.dim_ = 3;
  m.dissipative_ = p.gamma.rad_per_s() > 0;
  m.lambda_ = p;
  return m;
}

HamiltonianModel HamiltonianModel::custom(int dimension, bool dissipative, Builder builder) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("HamiltonianModel: dimension must be 2 or 3");
  if (!builder) throw std::invalid_argument("HamiltonianModel: empty builder");
  HamiltonianModel m;
  m.kind_ = SystemKind::Custom;
  m.dim_ = dimension;
  m.dissipative_ = dissipative;
  m.custom_ = std::move(builder);
  return m;
}

const TwoLevelParams& HamiltonianModel::two_level_params() const {
  if (kind_ != SystemKind::TwoLevel) throw std::logic_error("not a two-level model");
  return two_;
}

const LambdaParams& HamiltonianModel::lambda_params() const {
  if (kind_ != SystemKind::Lambda) throw std::logic_error("not a Lambda model");
  return lambda_;
}

HamiltonianModel HamiltonianModel::with_microwave_scale(double scale) const {
  HamiltonianModel m = *this;
  m.two_.omega_m = AngularFrequency::from_rad_per_s(two_.omega_m.rad_per_s() * scale);
  m.lambda_.omega_m = AngularFrequency::from_rad_per_s(lambda_.omega_m.rad_per_s() * scale);
  return m;
}

ComplexMatrix HamiltonianModel::matrix(const ControlValues& c) const {
  switch (kind_) {
    case SystemKind::TwoLevel:
      return two_level_hamiltonian(c.delta, two_);
    case SystemKind::Lambda:
      return lambda_hamiltonian(c.delta, c.omega_p, c.omega_s, lambda_);
    case SystemKind::Custom:
      return custom_(c);
  }
  throw std::logic_error("unreachable");
}

}  // namespace quad
