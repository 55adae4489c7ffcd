#ifndef QUAD_ANALYSIS_HPP
#define QUAD_ANALYSIS_HPP

#include "quad/core_model.hpp"

namespace quad {

struct TransferMetrics {
  double fidelity;
  double error;
  double final_norm_sq;
};

/// Fidelity is the raw population of the target bare state; decayed norm
/// counts as error.
TransferMetrics transfer_metrics(const QuantumState& final, int target_index);

/// pi / omega_m.
double pi_time(AngularFrequency omega_m);

/// 2 pi Delta / gap^2.
double t0_time(AngularFrequency delta_one_photon, AngularFrequency omega_gap);

/// Large-Delta reduction of the Lambda system onto {|1>, |2>}.
struct EffectiveTwoLevel {
  AngularFrequency omega_eff;       // omega_p omega_s / (2 Delta)
  AngularFrequency stark_shift_1;   // omega_p^2 / (4 Delta)
  AngularFrequency stark_shift_2;   // omega_s^2 / (4 Delta)
  AngularFrequency gamma_eff;       // gamma (omega_p^2 + omega_s^2) / (4 Delta^2)
};

/// Requires Delta >= 100 max(omega_p, omega_s).
EffectiveTwoLevel adiabatic_elimination(const LambdaParams& params, AngularFrequency omega_p,
                                        AngularFrequency omega_s);

/// Two-level model in the simulation form 1/2 [[2 delta_eff, omega_eff], [omega_eff, 0]]
/// whose couplings follow the instantaneous Raman couplings of the controls.
/// Both levels are light-shifted down, so relative to |2> the detuning is
/// delta_eff = delta - stark_shift_1 + stark_shift_2. Loss enters as a uniform
/// amplitude decay gamma_eff / 2 on each level. omega_m, if present, interferes
/// with the (negative) Raman coupling.
HamiltonianModel effective_two_level_model(const LambdaParams& params);

}  // namespace quad

#endif  // QUAD_ANALYSIS_HPP
