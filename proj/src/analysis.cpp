#include "quad/analysis.hpp"

#include <algorithm>
#include <numbers>

namespace quad {

TransferMetrics transfer_metrics(const QuantumState& final, int target_index) {
  if (target_index < 0 || target_index >= final.dimension()) {
    throw std::invalid_argument("transfer_metrics: target index out of range");
  }
  const double f = final.population(target_index);
  return {f, 1.0 - f, final.norm_sq()};
}

double pi_time(AngularFrequency omega_m) {
  if (!(omega_m.rad_per_s() > 0)) throw std::invalid_argument("pi_time: omega_m must be > 0");
  return std::numbers::pi / omega_m.rad_per_s();
}

double t0_time(AngularFrequency delta_one_photon, AngularFrequency omega_gap) {
  const double d = delta_one_photon.rad_per_s();
  const double g = omega_gap.rad_per_s();
  if (!(d > 0) || !(g > 0)) throw std::invalid_argument("t0_time: Delta and gap must be > 0");
  return 2 * std::numbers::pi * d / (g * g);
}

EffectiveTwoLevel adiabatic_elimination(const LambdaParams& params, AngularFrequency omega_p,
                                        AngularFrequency omega_s) {
  const double d = params.delta_one_photon.rad_per_s();
  const double wp = omega_p.rad_per_s();
  const double ws = omega_s.rad_per_s();
  if (!(d > 0) || d < 100 * std::max(std::abs(wp), std::abs(ws))) {
    throw std::invalid_argument("adiabatic_elimination: requires Delta >= 100 max(omega_p, omega_s)");
  }
  const double g = params.gamma.rad_per_s();
  return {AngularFrequency::from_rad_per_s(wp * ws / (2 * d)),
          AngularFrequency::from_rad_per_s(wp * wp / (4 * d)),
          AngularFrequency::from_rad_per_s(ws * ws / (4 * d)),
          AngularFrequency::from_rad_per_s(g * (wp * wp + ws * ws) / (4 * d * d))};
}

HamiltonianModel effective_two_level_model(const LambdaParams& params) {
  validate(params);
  const bool lossy = params.gamma.rad_per_s() > 0;
  return HamiltonianModel::custom(2, lossy, [params](const ControlValues& c) {
    const EffectiveTwoLevel eff = adiabatic_elimination(params, AngularFrequency::from_rad_per_s(c.omega_p),
                                                        AngularFrequency::from_rad_per_s(c.omega_s));
    const double delta_eff = c.delta - eff.stark_shift_1.rad_per_s() + eff.stark_shift_2.rad_per_s();
    // The Raman path enters with negative sign: -omega_p omega_s / (4 Delta) off the diagonal.
    const double coupling = params.omega_m.rad_per_s() - eff.omega_eff.rad_per_s();
    ComplexMatrix h = two_level_hamiltonian<double>(delta_eff, coupling);
    const Complex decay(0, -eff.gamma_eff.rad_per_s() / 2);
    h(0, 0) += decay;
    h(1, 1) += decay;
    return h;
  });
}

}  // namespace quad
