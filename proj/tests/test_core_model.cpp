#include "quad/core_model.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

using namespace quad;

namespace {

const double kTwoPi = 2 * std::numbers::pi;

LambdaParams fig_lambda(double gamma_hz = 0.0, double omega_m_hz = 0.0) {
  return {AngularFrequency::from_hz(5e6), AngularFrequency::from_hz(5e6), AngularFrequency::from_hz(omega_m_hz),
          AngularFrequency::from_hz(10e9), AngularFrequency::from_hz(gamma_hz)};
}

}  // namespace

TEST(AngularFrequency, HzConversionAppliesTwoPiOnce) {
  const auto w = AngularFrequency::from_hz(150e3);
  EXPECT_DOUBLE_EQ(w.rad_per_s(), kTwoPi * 150e3);
  EXPECT_DOUBLE_EQ(w.hz(), 150e3);
  EXPECT_THROW(AngularFrequency::from_hz(std::nan("")), std::invalid_argument);
}

TEST(QuantumState, RejectsBadInput) {
  EXPECT_THROW(QuantumState(StateVector::Zero(1)), std::invalid_argument);
  StateVector v(2);
  v << 1.0, 0.1;
  EXPECT_THROW(QuantumState{v}, std::invalid_argument);
  EXPECT_THROW(QuantumState::basis(3, 3), std::invalid_argument);
  EXPECT_EQ(QuantumState::basis(3, 2).population(2), 1.0);
}

TEST(LzHamiltonian, ResonanceGivesHalfOmegaEigenvalues) {
  const double w = 1.7;
  const Matrix2<double> h = lz_hamiltonian(0.0, w);
  EXPECT_EQ(h(0, 1), Complex(w / 2));
  EXPECT_EQ(h(0, 0), Complex(0));
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Matrix2<double>>(h).eigenvalues();
  EXPECT_NEAR(ev(0), -w / 2, 1e-15);
  EXPECT_NEAR(ev(1), w / 2, 1e-15);
}

TEST(LzHamiltonian, DetuningEqualToOmega) {
  const double w = 3.0;
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Matrix2<double>>(lz_hamiltonian(w, w)).eigenvalues();
  EXPECT_NEAR(ev(1), w / std::sqrt(2.0), 1e-14);
}

TEST(LzHamiltonian, GapAtSweepStart) {
  const double dm = kTwoPi * 10e6;
  const double w = kTwoPi * 150e3;
  const auto es = lz_eigensystem(-dm, w);
  EXPECT_NEAR(2 * es.e_plus / kTwoPi, 10.001125e6, 1.0);
  EXPECT_THROW(lz_hamiltonian(std::numeric_limits<double>::infinity(), 1.0), std::invalid_argument);
}

TEST(TwoLevelHamiltonian, ResonantAndTrace) {
  const double wm = kTwoPi * 150e3;
  const Matrix2<double> h0 = two_level_hamiltonian(0.0, wm);
  EXPECT_EQ(h0(0, 0), Complex(0));
  EXPECT_EQ(h0(1, 0), Complex(wm / 2));
  const double dm = kTwoPi * 10e6;
  EXPECT_DOUBLE_EQ(two_level_hamiltonian(dm, wm).trace().real(), dm);
}

TEST(LambdaHamiltonian, BlockStructureWithoutRamanFields) {
  const LambdaParams p = fig_lambda(5.6e6, 150e3);
  const Matrix3<double> h = lambda_hamiltonian(0.3, 0.0, 0.0, p);
  const Matrix2<double> two = two_level_hamiltonian<double>(0.3, p.omega_m.rad_per_s());
  EXPECT_EQ((h.topLeftCorner<2, 2>() - two).norm(), 0.0);
  EXPECT_EQ(h(0, 2), Complex(0));
  EXPECT_EQ(h(1, 2), Complex(0));
  EXPECT_EQ(h(2, 0), Complex(0));
}

TEST(LambdaHamiltonian, HermitianWithoutDecay) {
  const LambdaParams p = fig_lambda();
  const double w0 = p.omega_p0.rad_per_s();
  const Matrix3<double> h = lambda_hamiltonian(12.0, w0, w0, p);
  EXPECT_LT((h - h.adjoint()).norm(), 1e-12 * h.norm());
  EXPECT_EQ(h(2, 2), Complex(p.delta_one_photon.rad_per_s()));
  EXPECT_EQ(h(0, 2), Complex(w0 / 2));
}

TEST(LambdaHamiltonian, DecayOnExcitedDiagonal) {
  const LambdaParams p = fig_lambda(5.6e6);
  const Matrix3<double> h = lambda_hamiltonian(0.0, 1.0, 1.0, p);
  EXPECT_DOUBLE_EQ(h(2, 2).real(), kTwoPi * 10e9);
  EXPECT_DOUBLE_EQ(h(2, 2).imag(), -kTwoPi * 5.6e6);
}

TEST(LzEigensystem, ResonanceAndSweepEnds) {
  const auto mid = lz_eigensystem(0.0, 2.0);
  EXPECT_NEAR(mid.theta, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(mid.phi_plus(0), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(mid.phi_plus(1), 1 / std::sqrt(2.0), 1e-15);

  const double dm = kTwoPi * 10e6;
  const double w = kTwoPi * 150e3;
  const auto start = lz_eigensystem(-dm, w);
  EXPECT_LT(start.theta, 0.02);
  EXPECT_NEAR(start.phi_minus(0), 1.0, 1e-4);
  EXPECT_NEAR(start.phi_minus(1), 0.0, 1e-2);
  const auto end = lz_eigensystem(dm, w);
  EXPECT_GT(end.theta, std::numbers::pi - 0.02);
  EXPECT_NEAR(end.phi_minus(0), 0.0, 1e-2);
  EXPECT_NEAR(end.phi_minus(1), -1.0, 1e-4);
}

TEST(LzEigensystem, DegeneratePointRejected) {
  EXPECT_THROW(lz_eigensystem(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(lz_eigensystem(1.0, -1.0), std::invalid_argument);
}

TEST(LzEigensystem, ResidualOnRandomGrid) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> delta(-1e8, 1e8);
  std::uniform_real_distribution<double> omega(1e3, 1e7);
  for (int i = 0; i < 1000; ++i) {
    const double d = delta(rng);
    const double w = omega(rng);
    const auto es = lz_eigensystem(d, w);
    const Matrix2<double> h = lz_hamiltonian(d, w);
    const Eigen::Vector2cd pp = es.phi_plus.cast<Complex>();
    const Eigen::Vector2cd pm = es.phi_minus.cast<Complex>();
    const double scale = h.norm();
    EXPECT_LT((h * pp - es.e_plus * pp).norm(), 1e-12 * scale);
    EXPECT_LT((h * pm - es.e_minus * pm).norm(), 1e-12 * scale);
  }
}

TEST(LzEigensystem, ThetaMonotoneInDetuning) {
  double prev = -1.0;
  for (int i = -500; i <= 500; ++i) {
    const double theta = lz_eigensystem(i * 0.05, 1.0).theta;
    EXPECT_GT(theta, prev);
    prev = theta;
  }
}

TEST(ThreeLevelGap, FigureParameters) {
  const LambdaParams p = fig_lambda();
  EXPECT_NEAR(three_level_gap(p).hz(), 1250.0, 1e-3);
  // Far detuned: the closed form tracks the exact splitting to second order in omega0/Delta.
  const double exact = three_level_gap_exact(p).rad_per_s();
  EXPECT_LT(std::abs(three_level_gap(p).rad_per_s() - exact) / exact, 1e-7);
  EXPECT_TRUE(far_detuned_regime(p, AngularFrequency::from_hz(10e6)));
}

TEST(ThreeLevelGap, Limits) {
  LambdaParams p = fig_lambda();
  p.delta_one_photon = {};
  EXPECT_DOUBLE_EQ(three_level_gap(p).rad_per_s(), p.omega_p0.rad_per_s());
  LambdaParams q = fig_lambda();
  q.omega_p0 = q.omega_s0 = {};
  EXPECT_EQ(three_level_gap(q).rad_per_s(), 0.0);
}

TEST(HamiltonianModel, MatrixMatchesBuilders) {
  const LambdaParams p = fig_lambda(5.6e6, 10e3);
  const auto m = HamiltonianModel::lambda(p);
  EXPECT_TRUE(m.dissipative());
  EXPECT_EQ(m.dimension(), 3);
  const ControlValues c{4.0, 5.0, 6.0};
  EXPECT_EQ((m.matrix(c) - lambda_hamiltonian(4.0, 5.0, 6.0, p)).norm(), 0.0);

  const auto scaled = m.with_microwave_scale(2.0);
  EXPECT_EQ(scaled.matrix(c)(0, 1), Complex(p.omega_m.rad_per_s()));

  const auto two = HamiltonianModel::two_level({AngularFrequency::from_hz(150e3)});
  EXPECT_FALSE(two.dissipative());
  EXPECT_THROW(two.lambda_params(), std::logic_error);
}
