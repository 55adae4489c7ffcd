#ifndef QUAD_EXPM_HPP
#define QUAD_EXPM_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace quad {

namespace detail {

// Smallest m with 0.5^(m+1) / (m+1)! below eps / 16: the truncation bound
// of the Taylor series once the argument is scaled to norm <= 1/2.
template <typename Real>
constexpr int taylor_order() {
  const Real eps = std::numeric_limits<Real>::epsilon() / 16;
  Real term = 1;
  int m = 0;
  while (term >= eps) {
    ++m;
    term = term * Real(0.5) / Real(m);
  }
  return m - 1;
}

}  // namespace detail

/// exp(A) for small dense matrices by scaling and squaring around a
/// fixed-order Taylor series. The trace is split off first; the remaining
/// matrix is halved until its 1-norm is at most 1/2, expanded, and squared back.
template <typename Derived>
typename Derived::PlainObject expm_small(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using std::ceil;
  using std::exp;
  using std::log2;

  if (a.rows() != a.cols()) throw std::invalid_argument("expm_small: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("expm_small: non-finite entry");

  const Eigen::Index n = a.rows();
  const Scalar mu = a.trace() / Real(n);
  Plain x = a;
  x.diagonal().array() -= mu;

  const Real norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > Real(0.5)) {
    squarings = static_cast<int>(ceil(log2(norm / Real(0.5))));
    x /= std::ldexp(Real(1), squarings);
  }

  constexpr int order = detail::taylor_order<Real>();
  const Plain identity = Plain::Identity(n, n);
  // Horner: I + x (I + x/2 (I + x/3 (...)))
  Plain result = identity;
  for (int k = order; k >= 1; --k) {
    result = identity + (x * result) / Real(k);
  }
  for (int i = 0; i < squarings; ++i) {
    result = (result * result).eval();
  }
  return exp(mu) * result;
}

}  // namespace quad

#endif  // QUAD_EXPM_HPP
