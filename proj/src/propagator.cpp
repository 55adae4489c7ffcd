#include "quad/propagator.hpp"

#include "quad/csv.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <ostream>

namespace quad {

std::string to_string(Method m) {
  switch (m) {
    case Method::PiecewiseExpm: return "expm";
    case Method::Rk4: return "rk4";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  if (name == "expm" || name == "piecewise_expm") return Method::PiecewiseExpm;
  if (name == "rk4") return Method::Rk4;
  throw std::invalid_argument("unknown method '" + name + "' (expected expm or rk4)");
}

namespace {

template <int N>
class Stepper {
 public:
  using Mat = Eigen::Matrix<Complex, N, N>;
  using Vec = Eigen::Matrix<Complex, N, 1>;

  explicit Stepper(const EvolveRequest& req)
      : model_(req.model.with_microwave_scale(req.perturbation.amplitude_scale)),
        schedule_(req.schedule),
        perturbation_(req.perturbation),
        backward_(req.direction == Direction::Backward) {}

  // Generator in the integration variable s: H(s) forward, -H(T - s) backward.
  Mat generator(double s) const {
    const double t = backward_ ? physical_time(s) : s;
    ControlValues c = evaluate(schedule_, t);
    c.delta += perturbation_.detuning_offset;
    c.omega_p *= perturbation_.amplitude_scale;
    c.omega_s *= perturbation_.amplitude_scale;
    Mat h = model_.matrix(c);
    if (backward_) h = -h;
    return h;
  }

  double physical_time(double s) const {
    if (!backward_) return s;
    const double t = schedule_.duration - s;
    return t < 0 ? 0.0 : t;
  }

 private:
  HamiltonianModel model_;
  const PulseSchedule& schedule_;
  Perturbation perturbation_;
  bool backward_;
};

// Above this 1-norm of H dt, scaling and squaring needs three or more
// squarings and its rounding (amplified 2^s per step) dominates the norm
// drift of long stiff runs.
constexpr double kSpectralThreshold = 4.0;

// exp(-i H dt) for Hermitian H through its eigendecomposition; unitary to
// rounding regardless of the size of H dt.
template <int N>
Eigen::Matrix<Complex, N, N> hermitian_step(const Eigen::Matrix<Complex, N, N>& h, double dt) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> es(h);
  Eigen::Matrix<Complex, N, 1> phases;
  for (int i = 0; i < N; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(-i H dt) for a lossy (non-Hermitian) H through its eigendecomposition.
// Eigenvalues have Im <= 0, so the result decays; the eigenbasis is close to
// orthonormal when the loss is weak next to the level splittings.
template <int N>
Eigen::Matrix<Complex, N, N> lossy_step(const Eigen::Matrix<Complex, N, N>& h, double dt) {
  using Mat = Eigen::Matrix<Complex, N, N>;
  const Eigen::ComplexEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw IntegrationError("eigendecomposition failed for lossy step");
  Eigen::Matrix<Complex, N, 1> factors;
  for (int i = 0; i < N; ++i) factors(i) = std::exp(Complex(0, -1) * es.eigenvalues()(i) * dt);
  const Mat& v = es.eigenvectors();
  return v * factors.asDiagonal() * v.inverse();
}

template <int N>
EvolveResult evolve_fixed(const EvolveRequest& req) {
  using Mat = typename Stepper<N>::Mat;
  using Vec = typename Stepper<N>::Vec;
  const Stepper<N> stepper(req);
  const Complex minus_i(0, -1);
  const double duration = req.schedule.duration;
  const std::size_t n = req.steps;
  const double dt = duration / static_cast<double>(n);
  const double norm0 = req.initial.norm_sq();
  const double norm_limit = norm0 + 1e-6;
  const bool hermitian = !req.model.dissipative();

  Vec psi = req.initial.amplitudes();
  EvolveResult result{req.initial, norm0, {}, {}};
  const std::size_t stride = req.trajectory_stride == 0 ? 1 : req.trajectory_stride;
  if (req.store_trajectory) {
    result.trajectory.reserve(n / stride + 2);
    result.trajectory.push_back({stepper.physical_time(0.0), StateVector(psi)});
  }

  auto time_at = [&](std::size_t k) { return duration * static_cast<double>(k) / static_cast<double>(n); };

  for (std::size_t k = 0; k < n; ++k) {
    if (req.method == Method::PiecewiseExpm) {
      const double mid = duration * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
      const Mat h = stepper.generator(mid);
      const bool stiff = h.cwiseAbs().colwise().sum().maxCoeff() * dt > kSpectralThreshold;
      if (stiff && hermitian) {
        psi = hermitian_step<N>(h, dt) * psi;
      } else if (stiff) {
        psi = lossy_step<N>(h, dt) * psi;
      } else {
        psi = expm_small(Mat(minus_i * dt * h)) * psi;
      }
    } else {
      const double t0 = time_at(k);
      const double t1 = time_at(k + 1);
      const double tm = 0.5 * (t0 + t1);
      const Mat h0 = stepper.generator(t0);
      const Mat hm = stepper.generator(tm);
      const Mat h1 = stepper.generator(t1);
      const Vec k1 = minus_i * (h0 * psi);
      const Vec k2 = minus_i * (hm * (psi + 0.5 * dt * k1));
      const Vec k3 = minus_i * (hm * (psi + 0.5 * dt * k2));
      const Vec k4 = minus_i * (h1 * (psi + dt * k3));
      psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const double norm = psi.squaredNorm();
    if (!std::isfinite(norm)) {
      throw IntegrationError("non-finite amplitude at step " + std::to_string(k + 1) + " of " + std::to_string(n));
    }
    if (norm > norm_limit) {
      throw IntegrationError("norm grew to " + csv::number(norm) + " at step " + std::to_string(k + 1) + " of " +
                             std::to_string(n) + "; increase steps");
    }
    if (req.store_trajectory && ((k + 1) % stride == 0 || k + 1 == n)) {
      result.trajectory.push_back({stepper.physical_time(time_at(k + 1)), StateVector(psi)});
    }
  }

  if (psi.squaredNorm() > 1.0 + 1e-9) {
    throw IntegrationError("final squared norm " + csv::number(psi.squaredNorm()) + " exceeds 1 + 1e-9");
  }
  result.final = QuantumState(StateVector(psi));
  result.final_norm_sq = psi.squaredNorm();
  result.populations.resize(N);
  for (int i = 0; i < N; ++i) result.populations[i] = std::norm(psi(i));
  return result;
}

}  // namespace

EvolveResult evolve(const EvolveRequest& req) {
  if (req.model.dimension() != req.initial.dimension()) {
    throw std::invalid_argument("evolve: model dimension " + std::to_string(req.model.dimension()) +
                                " does not match state dimension " + std::to_string(req.initial.dimension()));
  }
  if (req.steps < 10) throw std::invalid_argument("evolve: steps must be >= 10");
  if (!(req.perturbation.amplitude_scale >= 0) || !std::isfinite(req.perturbation.detuning_offset)) {
    throw std::invalid_argument("evolve: invalid perturbation");
  }
  if (req.direction == Direction::Backward && req.model.dissipative()) {
    throw std::invalid_argument("evolve: backward propagation is undefined for dissipative models");
  }
  req.schedule.validate();
  return req.model.dimension() == 2 ? evolve_fixed<2>(req) : evolve_fixed<3>(req);
}

ConvergenceReport convergence_probe(const EvolveRequest& req, int refinements) {
  if (refinements < 3) throw std::invalid_argument("convergence_probe: refinements must be >= 3");
  std::vector<StateVector> finals;
  std::vector<std::size_t> steps;
  EvolveRequest r = req;
  r.store_trajectory = false;
  for (int i = 0; i < refinements; ++i) {
    r.steps = req.steps << i;
    finals.push_back(evolve(r).final.amplitudes());
    steps.push_back(r.steps);
  }

  ConvergenceReport report;
  const StateVector& richest = finals.back();
  for (std::size_t i = 0; i < finals.size(); ++i) {
    report.levels.push_back({steps[i], (finals[i] - richest).norm()});
  }
  const std::size_t m = finals.size();
  const double coarse = (finals[m - 3] - finals[m - 2]).norm();
  const double fine = (finals[m - 2] - finals[m - 1]).norm();
  constexpr double floor = 1e-13;
  report.observed_order =
      (coarse < floor || fine < floor) ? std::numeric_limits<double>::quiet_NaN() : std::log2(coarse / fine);
  return report;
}

void write_trajectory_csv(std::ostream& out, const EvolveResult& result) {
  const int dim = result.final.dimension();
  std::vector<std::string> header{"t_s"};
  for (int i = 1; i <= dim; ++i) {
    header.push_back("re_" + std::to_string(i));
    header.push_back("im_" + std::to_string(i));
  }
  header.push_back("norm_sq");
  for (int i = 1; i <= dim; ++i) header.push_back("pop" + std::to_string(i));
  out << csv::join(header);

  for (const auto& p : result.trajectory) {
    std::vector<std::string> row{csv::number(p.t)};
    for (int i = 0; i < dim; ++i) {
      row.push_back(csv::number(p.amplitudes(i).real()));
      row.push_back(csv::number(p.amplitudes(i).imag()));
    }
    row.push_back(csv::number(p.amplitudes.squaredNorm()));
    for (int i = 0; i < dim; ++i) row.push_back(csv::number(std::norm(p.amplitudes(i))));
    out << csv::join(row);
  }
}

}  // namespace quad
