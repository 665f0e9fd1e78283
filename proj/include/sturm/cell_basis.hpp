#pragma once

#include <cmath>

#include <Eigen/Core>

namespace sturm {

/// Fundamental solutions of y'' = -omega * y on a cell of signed length t,
/// C(0) = 1, C'(0) = 0, S(0) = 0, S'(0) = 1, together with their derivatives
/// with respect to omega and the exact integrals of their products.
///
/// The same closed forms cover the trigonometric (omega > 0), hyperbolic
/// (omega < 0) and linear (omega = 0) regimes; quantities that cancel
/// catastrophically for small omega * t^2 are summed as power series.
template <typename Scalar>
struct CellBasis {
  Scalar c;    // C(t)
  Scalar s;    // S(t)
  Scalar dc;   // dC/domega
  Scalar ds;   // dS/domega
  Scalar dcp;  // d(C')/domega, with C' = -omega * S
  Scalar icc;  // int_0^t C^2
  Scalar ics;  // int_0^t C S
  Scalar iss;  // int_0^t S^2
};

/// C(t) and S(t) only.
template <typename Scalar>
inline void basis_cs(Scalar omega, Scalar t, Scalar& c, Scalar& s) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  if (omega > Scalar(0)) {
    const Scalar r = sqrt(omega);
    c = cos(r * t);
    s = sin(r * t) / r;
  } else if (omega < Scalar(0)) {
    const Scalar r = sqrt(-omega);
    c = cosh(r * t);
    s = sinh(r * t) / r;
  } else {
    c = Scalar(1);
    s = t;
  }
}

template <typename Scalar>
CellBasis<Scalar> cell_basis(Scalar omega, Scalar t) {
  using std::abs;
  CellBasis<Scalar> b;
  basis_cs(omega, t, b.c, b.s);
  const Scalar z = omega * t * t;
  if (abs(z) < Scalar(0.5)) {
    // dS/domega = t^3 sum_{j>=1} j (-1)^j z^{j-1} / (2j+1)!
    // int S^2   = t^3 sum_{j>=1} (-1)^{j+1} 4^j z^{j-1} / (2 (2j+1)!)
    const Scalar eps = Eigen::NumTraits<Scalar>::epsilon();
    Scalar u = Scalar(-1) / Scalar(6);
    Scalar w = Scalar(1) / Scalar(3);
    Scalar ds_sum = u;
    Scalar iss_sum = w;
    for (int j = 1; j < 40; ++j) {
      const Scalar denom = Scalar((2 * j + 2) * (2 * j + 3));
      u *= -z / denom;
      w *= Scalar(-4) * z / denom;
      const Scalar du = Scalar(j + 1) * u;
      ds_sum += du;
      iss_sum += w;
      if (abs(du) <= eps * abs(ds_sum) && abs(w) <= eps * abs(iss_sum)) break;
    }
    const Scalar t3 = t * t * t;
    b.ds = t3 * ds_sum;
    b.iss = t3 * iss_sum;
  } else {
    b.ds = (t * b.c - b.s) / (Scalar(2) * omega);
    b.iss = (t - b.s * b.c) / (Scalar(2) * omega);
  }
  b.dc = -t * b.s / Scalar(2);
  b.dcp = -(b.s + t * b.c) / Scalar(2);
  b.icc = (t + b.s * b.c) / Scalar(2);
  b.ics = b.s * b.s / Scalar(2);
  return b;
}

/// Transfer matrix acting on (y, y', dy/dmu, dy'/dmu).
template <typename Scalar>
Eigen::Matrix<Scalar, 4, 4> cell_propagator(const CellBasis<Scalar>& b, Scalar omega) {
  Eigen::Matrix<Scalar, 4, 4> m = Eigen::Matrix<Scalar, 4, 4>::Zero();
  m(0, 0) = b.c;
  m(0, 1) = b.s;
  m(1, 0) = -omega * b.s;
  m(1, 1) = b.c;
  m.template block<2, 2>(2, 2) = m.template block<2, 2>(0, 0);
  m(2, 0) = b.dc;
  m(2, 1) = b.ds;
  m(3, 0) = b.dcp;
  m(3, 1) = b.dc;
  return m;
}

/// int_0^t y^2 for y = y0 C + yp0 S.
template <typename Scalar>
Scalar cell_square_integral(const CellBasis<Scalar>& b, Scalar y0, Scalar yp0) {
  return y0 * y0 * b.icc + Scalar(2) * y0 * yp0 * b.ics + yp0 * yp0 * b.iss;
}

}  // namespace sturm
