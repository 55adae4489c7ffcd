#ifndef QUAD_CORE_MODEL_HPP
#define QUAD_CORE_MODEL_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace quad {

using Complex = std::complex<double>;

template <typename Scalar, int N>
using SquareMatrix = Eigen::Matrix<std::complex<Scalar>, N, N>;

template <typename Scalar>
using Matrix2 = SquareMatrix<Scalar, 2>;

template <typename Scalar>
using Matrix3 = SquareMatrix<Scalar, 3>;

// Runtime-sized but stack-allocated: every system here has dimension 2 or 3.
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;
using StateVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, 0, 3, 1>;

/// Angular frequency in rad/s. Configuration values arrive as ordinary
/// frequencies and pass through from_hz, the only place 2*pi is applied.
class AngularFrequency {
 public:
  constexpr AngularFrequency() = default;

  static AngularFrequency from_rad_per_s(double w) {
    if (!std::isfinite(w)) throw std::invalid_argument("angular frequency must be finite");
    AngularFrequency a;
    a.value_ = w;
    return a;
  }

  static AngularFrequency from_hz(double f) { return from_rad_per_s(2.0 * std::numbers::pi * f); }

  constexpr double rad_per_s() const { return value_; }
  double hz() const { return value_ / (2.0 * std::numbers::pi); }

  friend constexpr auto operator<=>(const AngularFrequency&, const AngularFrequency&) = default;

 private:
  double value_ = 0.0;
};

/// Complex amplitudes over the bare basis |1>, |2> (, |3>).
class QuantumState {
 public:
  explicit QuantumState(StateVector amplitudes);

  static QuantumState basis(int dimension, int index);

  int dimension() const { return static_cast<int>(amps_.size()); }
  const StateVector& amplitudes() const { return amps_; }
  double norm_sq() const { return amps_.squaredNorm(); }
  double population(int index) const { return std::norm(amps_(index)); }

 private:
  StateVector amps_;
};

struct TwoLevelParams {
  AngularFrequency omega_m;
};

struct LambdaParams {
  AngularFrequency omega_p0;
  AngularFrequency omega_s0;
  AngularFrequency omega_m;
  AngularFrequency delta_one_photon;
  AngularFrequency gamma;
};

void validate(const TwoLevelParams& p);
void validate(const LambdaParams& p);

/// Instantaneous control values along a schedule, all in rad/s.
struct ControlValues {
  double delta = 0.0;
  double omega_p = 0.0;
  double omega_s = 0.0;
};

/// Symmetric Landau-Zener form: 1/2 [[delta, omega], [omega, -delta]].
template <typename Scalar>
Matrix2<Scalar> lz_hamiltonian(Scalar delta, Scalar omega) {
  using std::isfinite;
  if (!isfinite(delta) || !isfinite(omega)) throw std::invalid_argument("lz_hamiltonian: non-finite input");
  Matrix2<Scalar> h;
  h << delta / 2, omega / 2,
       omega / 2, -delta / 2;
  return h;
}

/// Two-level form used for simulation: 1/2 [[2 delta, omega_m], [omega_m, 0]].
/// Differs from lz_hamiltonian by (delta/2) I.
template <typename Scalar>
Matrix2<Scalar> two_level_hamiltonian(Scalar delta, Scalar omega_m) {
  Matrix2<Scalar> h;
  h << delta, omega_m / 2,
       omega_m / 2, Scalar(0);
  return h;
}

inline Matrix2<double> two_level_hamiltonian(double delta, const TwoLevelParams& p) {
  return two_level_hamiltonian<double>(delta, p.omega_m.rad_per_s());
}

/// Lambda system with decaying excited state |3>:
/// 1/2 [[2 delta, omega_m, omega_p], [omega_m, 0, omega_s], [omega_p, omega_s, 2 Delta - 2 i gamma]].
template <typename Scalar>
Matrix3<Scalar> lambda_hamiltonian(Scalar delta, Scalar omega_p, Scalar omega_s, Scalar omega_m,
                                   Scalar big_delta, Scalar gamma) {
  using C = std::complex<Scalar>;
  Matrix3<Scalar> h;
  h << C(delta), C(omega_m / 2), C(omega_p / 2),
       C(omega_m / 2), C(0), C(omega_s / 2),
       C(omega_p / 2), C(omega_s / 2), C(big_delta, -gamma);
  return h;
}

inline Matrix3<double> lambda_hamiltonian(double delta, double omega_p, double omega_s, const LambdaParams& p) {
  return lambda_hamiltonian<double>(delta, omega_p, omega_s, p.omega_m.rad_per_s(),
                                    p.delta_one_photon.rad_per_s(), p.gamma.rad_per_s());
}

/// Eigenpairs of lz_hamiltonian. theta lies in [0, pi] with cos(theta) = -delta / r.
struct Eigensystem2 {
  double e_plus;
  double e_minus;
  double theta;
  Eigen::Vector2d phi_plus;
  Eigen::Vector2d phi_minus;
};

Eigensystem2 lz_eigensystem(double delta, double omega);

/// Gap between the two lowest levels of the resonant Lambda system with
/// constant equal couplings: sqrt(Delta^2 + omega0^2) - Delta.
AngularFrequency three_level_gap(const LambdaParams& p);

/// Exact magnitude of the lowest bright-state eigenvalue of the Lambda
/// Hamiltonian at delta = 0, gamma = 0, omega_m = 0:
/// (sqrt(Delta^2 + 2 omega0^2) - Delta) / 2. Agrees with three_level_gap to
/// O(omega0^2 / Delta^2).
AngularFrequency three_level_gap_exact(const LambdaParams& p);

/// Delta >= 100 delta_m and delta_m >= 100 gap.
bool far_detuned_regime(const LambdaParams& p, AngularFrequency delta_m);

enum class SystemKind { TwoLevel, Lambda, Custom };

/// Static system parameters plus the rule that turns control values into H(t).
class HamiltonianModel {
 public:
  using Builder = std::function<ComplexMatrix(const ControlValues&)>;

  static HamiltonianModel two_level(TwoLevelParams p);
  static HamiltonianModel lambda(LambdaParams p);
  /// Arbitrary builder of fixed dimension. `dissipative` marks builders whose
  /// matrices carry a non-Hermitian loss term.
  static HamiltonianModel custom(int dimension, bool dissipative, Builder builder);

  SystemKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  bool dissipative() const { return dissipative_; }

  const TwoLevelParams& two_level_params() const;
  const LambdaParams& lambda_params() const;

  /// Copy with the microwave coupling omega_m multiplied by `scale`.
  HamiltonianModel with_microwave_scale(double scale) const;

  ComplexMatrix matrix(const ControlValues& c) const;

 private:
  HamiltonianModel() = default;

  SystemKind kind_ = SystemKind::TwoLevel;
  int dim_ = 2;
  bool dissipative_ = false;
  TwoLevelParams two_{};
  LambdaParams lambda_{};
  Builder custom_;
};

}  // namespace quad

#endif  // QUAD_CORE_MODEL_HPP
