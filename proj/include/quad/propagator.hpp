#ifndef QUAD_PROPAGATOR_HPP
#define QUAD_PROPAGATOR_HPP

#include "quad/core_model.hpp"
#include "quad/expm.hpp"
#include "quad/schedules.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace quad {

enum class Method { PiecewiseExpm, Rk4 };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

enum class Direction { Forward, Backward };

/// Systematic control errors applied on top of a schedule: every Rabi
/// coupling is multiplied by amplitude_scale and detuning_offset (rad/s) is
/// added to delta(t).
struct Perturbation {
  double amplitude_scale = 1.0;
  double detuning_offset = 0.0;
};

struct EvolveRequest {
  EvolveRequest(HamiltonianModel m, PulseSchedule s, QuantumState psi0)
      : model(std::move(m)), schedule(std::move(s)), initial(std::move(psi0)) {}

  HamiltonianModel model;
  PulseSchedule schedule;
  QuantumState initial;
  std::size_t steps = 100000;
  Method method = Method::PiecewiseExpm;
  bool store_trajectory = false;
  std::size_t trajectory_stride = 1;
  Perturbation perturbation;
  /// Backward runs apply U^dagger: the schedule is traversed from T to 0
  /// with H negated. Only defined for non-dissipative models.
  Direction direction = Direction::Forward;
};

struct TrajectoryPoint {
  double t;
  StateVector amplitudes;
};

struct EvolveResult {
  QuantumState final;
  double final_norm_sq;
  std::vector<double> populations;
  std::vector<TrajectoryPoint> trajectory;
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrates i d(psi)/dt = H(t) psi over the schedule duration.
/// PiecewiseExpm: exact exponential of H sampled at each interval midpoint.
/// Rk4: classical fourth-order Runge-Kutta.
/// Throws IntegrationError on non-finite amplitudes or norm growth beyond 1e-6.
EvolveResult evolve(const EvolveRequest& req);

struct ConvergenceLevel {
  std::size_t steps;
  double error_vs_richest;
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  /// log2 of the ratio of successive differences between the three richest
  /// runs; NaN when those differences are at rounding level.
  double observed_order;
};

/// Runs `refinements` doublings starting at req.steps.
ConvergenceReport convergence_probe(const EvolveRequest& req, int refinements);

/// Columns: t_s, re_1, im_1, ..., norm_sq, pop1, ..., popN.
void write_trajectory_csv(std::ostream& out, const EvolveResult& result);

}  // namespace quad

#endif  // QUAD_PROPAGATOR_HPP
