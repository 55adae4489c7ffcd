#include "quad/analysis.hpp"
#include "quad/propagator.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

using namespace quad;

namespace {

const double kTwoPi = 2 * std::numbers::pi;
const AngularFrequency kOmegaM = AngularFrequency::from_hz(150e3);
const AngularFrequency kDeltaM = AngularFrequency::from_hz(10e6);
const double kTauPi = std::numbers::pi / kOmegaM.rad_per_s();

EvolveRequest siquad_two_level(double t_over_tau, std::size_t steps, Method method = Method::PiecewiseExpm) {
  EvolveRequest req(HamiltonianModel::two_level({kOmegaM}),
                    make_sweep_schedule(Protocol::Siquad, t_over_tau * kTauPi, kDeltaM, kOmegaM),
                    QuantumState::basis(2, 0));
  req.steps = steps;
  req.method = method;
  return req;
}

LambdaParams small_lambda(double gamma_hz) {
  return {AngularFrequency::from_hz(5e6), AngularFrequency::from_hz(5e6), AngularFrequency{},
          AngularFrequency::from_hz(20e6), AngularFrequency::from_hz(gamma_hz)};
}

}  // namespace

TEST(Evolve, ResonantPiPulseInverts) {
  EvolveRequest req(HamiltonianModel::two_level({kOmegaM}), make_flat_schedule(kTauPi, kOmegaM),
                    QuantumState::basis(2, 0));
  req.steps = 1000;
  const auto r = evolve(req);
  EXPECT_NEAR(kTauPi, 3.333e-6, 1e-9);
  EXPECT_LT(transfer_metrics(r.final, 1).error, 1e-8);
}

TEST(Evolve, ConstantHamiltonianExactForAnyStepCount) {
  const double offset = 0.7 * kOmegaM.rad_per_s();
  const double T = 2.3 * kTauPi;
  const double w = kOmegaM.rad_per_s();
  const double r = std::hypot(w, offset);
  const double rabi = w * w / (r * r) * std::pow(std::sin(r * T / 2), 2);
  for (std::size_t steps : {10u, 137u, 5000u}) {
    EvolveRequest req(HamiltonianModel::two_level({kOmegaM}), make_flat_schedule(T, kOmegaM),
                      QuantumState::basis(2, 0));
    req.steps = steps;
    req.perturbation.detuning_offset = offset;
    EXPECT_NEAR(evolve(req).populations[1], rabi, 1e-12) << steps;
  }
}

TEST(Evolve, ExcitedStateDecay) {
  const LambdaParams p{{}, {}, {}, AngularFrequency::from_hz(10e9), AngularFrequency::from_hz(5.6e6)};
  EvolveRequest req(HamiltonianModel::lambda(p), make_flat_schedule(1e-7, AngularFrequency::from_hz(1.0)),
                    QuantumState::basis(3, 2));
  req.steps = 1000;
  req.store_trajectory = true;
  req.trajectory_stride = 50;
  const auto r = evolve(req);
  const double gamma = p.gamma.rad_per_s();
  for (const auto& pt : r.trajectory) {
    const double expected = std::exp(-2 * gamma * pt.t);
    EXPECT_NEAR(std::norm(pt.amplitudes(2)), expected, 1e-12 + 1e-10 * expected);
  }
  EXPECT_EQ(r.trajectory.size(), 21u);
}

TEST(Evolve, SiquadTransferBothMethods) {
  const auto expm = evolve(siquad_two_level(5.83, 100000));
  const auto rk4 = evolve(siquad_two_level(5.83, 100000, Method::Rk4));
  const double e1 = transfer_metrics(expm.final, 1).error;
  const double e2 = transfer_metrics(rk4.final, 1).error;
  EXPECT_LT(e1, 1e-3);
  EXPECT_LT(e2, 1e-3);
  EXPECT_NEAR(e1, e2, 1e-8);
}

TEST(Evolve, MethodsAgreeOnPopulations) {
  const auto a = evolve(siquad_two_level(6.05, 200000));
  const auto b = evolve(siquad_two_level(6.05, 200000, Method::Rk4));
  EXPECT_NEAR(a.populations[0], b.populations[0], 1e-8);
  EXPECT_NEAR(a.populations[1], b.populations[1], 1e-8);
}

TEST(Evolve, UnitaryNormConservation) {
  EvolveRequest two = siquad_two_level(5.83, 10000);
  two.store_trajectory = true;
  two.trajectory_stride = 100;
  for (const auto& pt : evolve(two).trajectory) EXPECT_NEAR(pt.amplitudes.squaredNorm(), 1.0, 1e-9);

  const LambdaParams p = small_lambda(0.0);
  EvolveRequest three(HamiltonianModel::lambda(p),
                      make_sweep_schedule(Protocol::Siquad, 2e-5, AngularFrequency::from_hz(1e6),
                                          three_level_gap(p), p.omega_p0),
                      QuantumState::basis(3, 0));
  three.steps = 20000;
  EXPECT_NEAR(evolve(three).final_norm_sq, 1.0, 1e-9);
}

TEST(Evolve, DissipativeNormMonotoneAndRateMatchesExcitedPopulation) {
  const LambdaParams p = small_lambda(1e6);
  const double gamma = p.gamma.rad_per_s();
  EvolveRequest req(HamiltonianModel::lambda(p),
                    make_stirap_schedule(1e-6, p.omega_p0, 0.2e-6, 0.125e-6), QuantumState::basis(3, 0));
  req.steps = 100000;
  req.store_trajectory = true;
  const auto r = evolve(req);
  const auto& tr = r.trajectory;
  ASSERT_EQ(tr.size(), req.steps + 1);
  double peak = 0.0;
  for (const auto& pt : tr) peak = std::max(peak, std::norm(pt.amplitudes(2)));
  int checked = 0;
  for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
    EXPECT_LE(tr[k + 1].amplitudes.squaredNorm(), tr[k].amplitudes.squaredNorm() + 1e-15);
    if (k % 997 != 0) continue;
    const double c3 = std::norm(tr[k].amplitudes(2));
    if (c3 < 1e-3 * peak) continue;
    const double dt = tr[k + 1].t - tr[k - 1].t;
    const double rate = (tr[k + 1].amplitudes.squaredNorm() - tr[k - 1].amplitudes.squaredNorm()) / dt;
    EXPECT_NEAR(rate, -2 * gamma * c3, 1e-6 * 2 * gamma * c3) << "t=" << tr[k].t;
    ++checked;
  }
  EXPECT_GT(checked, 20);
  EXPECT_LT(r.final_norm_sq, 1.0);
}

TEST(Evolve, StiffLossyStepsContractAndConverge) {
  // Far-detuned excited level: |H dt| of several hundred per step.
  const LambdaParams p{AngularFrequency::from_hz(5e6), AngularFrequency::from_hz(5e6), AngularFrequency{},
                       AngularFrequency::from_hz(10e9), AngularFrequency::from_hz(5.6e6)};
  const PulseSchedule sched = make_stirap_schedule(1e-3, p.omega_p0, 0.2e-3, 0.125e-3);
  auto run = [&](std::size_t steps) {
    EvolveRequest req(HamiltonianModel::lambda(p), sched, QuantumState::basis(3, 0));
    req.steps = steps;
    req.store_trajectory = true;
    return evolve(req);
  };
  const auto coarse = run(50000);
  for (std::size_t k = 1; k < coarse.trajectory.size(); ++k) {
    ASSERT_LE(coarse.trajectory[k].amplitudes.squaredNorm(),
              coarse.trajectory[k - 1].amplitudes.squaredNorm() + 4e-16)
        << k;
  }
  EXPECT_LT(coarse.final_norm_sq, 1.0);
  const auto fine = run(200000);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(coarse.populations[i], fine.populations[i], 1e-6) << i;
}

TEST(Evolve, TimeReversalReturnsInitialState) {
  EvolveRequest fwd = siquad_two_level(5.83, 50000);
  const auto there = evolve(fwd);
  EvolveRequest back(fwd.model, fwd.schedule, there.final);
  back.steps = fwd.steps;
  back.direction = Direction::Backward;
  const auto home = evolve(back);
  EXPECT_LT((home.final.amplitudes() - fwd.initial.amplitudes()).norm(), 1e-7);

  const LambdaParams p = small_lambda(0.0);
  EvolveRequest f3(HamiltonianModel::lambda(p),
                   make_stirap_schedule(1e-6, p.omega_p0, 0.2e-6, 0.125e-6), QuantumState::basis(3, 0));
  f3.steps = 20000;
  const auto mid = evolve(f3);
  EvolveRequest b3(f3.model, f3.schedule, mid.final);
  b3.steps = f3.steps;
  b3.direction = Direction::Backward;
  EXPECT_LT((evolve(b3).final.amplitudes() - f3.initial.amplitudes()).norm(), 1e-7);
}

TEST(Evolve, SymmetricFormGivesSamePopulations) {
  const double w = kOmegaM.rad_per_s();
  const auto symmetric = HamiltonianModel::custom(2, false, [w](const ControlValues& c) {
    return ComplexMatrix(lz_hamiltonian(c.delta, w));
  });
  const EvolveRequest base = siquad_two_level(4.0, 50000);
  EvolveRequest other(symmetric, base.schedule, base.initial);
  other.steps = base.steps;
  const auto a = evolve(base);
  const auto b = evolve(other);
  EXPECT_NEAR(a.populations[0], b.populations[0], 1e-9);
  EXPECT_NEAR(a.populations[1], b.populations[1], 1e-9);
}

TEST(Evolve, ExcitedLevelDecouplesWithoutRamanFields) {
  const LambdaParams p{{}, {}, kOmegaM, AngularFrequency::from_hz(10e9), {}};
  EvolveRequest req(HamiltonianModel::lambda(p),
                    make_sweep_schedule(Protocol::Siquad, 5.83 * kTauPi, kDeltaM, kOmegaM),
                    QuantumState::basis(3, 0));
  req.steps = 20000;
  req.store_trajectory = true;
  req.trajectory_stride = 100;
  const auto r = evolve(req);
  for (const auto& pt : r.trajectory) EXPECT_LT(std::norm(pt.amplitudes(2)), 1e-12);
  const auto two = evolve(siquad_two_level(5.83, 20000));
  EXPECT_NEAR(r.populations[1], two.populations[1], 1e-12);
}

TEST(Evolve, BitIdenticalReruns) {
  const auto a = evolve(siquad_two_level(5.83, 20000));
  const auto b = evolve(siquad_two_level(5.83, 20000));
  EXPECT_EQ(a.final.amplitudes(), b.final.amplitudes());
}

TEST(Evolve, RejectsInvalidRequests) {
  EvolveRequest mismatch(HamiltonianModel::two_level({kOmegaM}), make_flat_schedule(kTauPi, kOmegaM),
                         QuantumState::basis(3, 0));
  EXPECT_THROW(evolve(mismatch), std::invalid_argument);
  EvolveRequest few = siquad_two_level(1.0, 5);
  EXPECT_THROW(evolve(few), std::invalid_argument);
  EvolveRequest lossy(HamiltonianModel::lambda(small_lambda(1e6)), make_flat_schedule(1e-6, kOmegaM),
                      QuantumState::basis(3, 0));
  lossy.direction = Direction::Backward;
  EXPECT_THROW(evolve(lossy), std::invalid_argument);
}

TEST(Evolve, NormGrowthAbortsWithDiagnostic) {
  const auto gain = HamiltonianModel::custom(2, true, [](const ControlValues&) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = Complex(0, 1e3);  // amplifying, unphysical
    return h;
  });
  EvolveRequest req(gain, make_flat_schedule(1e-3, kOmegaM), QuantumState::basis(2, 0));
  req.steps = 100;
  try {
    evolve(req);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_NE(std::string(e.what()).find("norm"), std::string::npos);
  }
}

TEST(ConvergenceProbe, ObservedOrders) {
  const auto expm = convergence_probe(siquad_two_level(5.83, 4000), 5);
  EXPECT_GE(expm.observed_order, 1.5);
  EXPECT_LE(expm.observed_order, 2.5);
  const auto rk4 = convergence_probe(siquad_two_level(5.83, 8000, Method::Rk4), 5);
  EXPECT_GE(rk4.observed_order, 3.5);
  EXPECT_LE(rk4.observed_order, 4.5);
  EXPECT_EQ(expm.levels.size(), 5u);
  EXPECT_EQ(expm.levels.back().error_vs_richest, 0.0);
}

TEST(TrajectoryCsv, ColumnsFollowDimension) {
  EvolveRequest req(HamiltonianModel::lambda(small_lambda(0.0)), make_flat_schedule(1e-7, kOmegaM),
                    QuantumState::basis(3, 0));
  req.steps = 10;
  req.store_trajectory = true;
  std::ostringstream out;
  write_trajectory_csv(out, evolve(req));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t_s,re_1,im_1,re_2,im_2,re_3,im_3,norm_sq,pop1,pop2,pop3");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 11);
}
