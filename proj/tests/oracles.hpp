#pragma once

// Reference computations used only by the tests. None of them touches the
// cell propagator: they work from the differential equation directly.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sturm/errors.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

using Fn = std::function<double(double)>;

/// Second-difference Dirichlet matrix on N interior points, diag 2/h^2 + q(x_i),
/// off-diagonal -1/h^2.
struct Tridiagonal {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
  double h;
};

inline Tridiagonal dirichlet_matrix(const Fn& q, int intervals) {
  const double h = pi / intervals;
  const int n = intervals - 1;
  Tridiagonal t{Eigen::VectorXd(n), Eigen::VectorXd::Constant(n - 1, -1.0 / (h * h)), h};
  for (int i = 0; i < n; ++i) t.diag[i] = 2.0 / (h * h) + q((i + 1) * h);
  return t;
}

/// Number of eigenvalues below lambda (Sturm sequence of the LDL^T pivots).
inline int count_below(const Tridiagonal& t, double lambda) {
  int count = 0;
  double d = 1.0;
  for (Eigen::Index i = 0; i < t.diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = t.diag[i] - lambda - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0) ++count;
  }
  return count;
}

/// k-th eigenvalue (0-based) by bisection on the Sturm count.
inline double matrix_eigenvalue(const Tridiagonal& t, int k) {
  double lo = t.diag.minCoeff() - 4.0 / (t.h * t.h);
  double hi = t.diag.maxCoeff() + 4.0 / (t.h * t.h);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (count_below(t, mid) > k ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Sign changes of the k-th eigenvector of the dense solver.
inline int eigenvector_sign_changes(const Tridiagonal& t, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(t.diag, t.off, Eigen::ComputeEigenvectors);
  const Eigen::VectorXd v = es.eigenvectors().col(k);
  const double floor = 1e-10 * v.cwiseAbs().maxCoeff();
  int changes = 0;
  double last = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) < floor) continue;
    if (last != 0.0 && (v[i] > 0) != (last > 0)) ++changes;
    last = v[i];
  }
  return changes;
}

/// Root of f on [lo, hi] given a sign change, by plain bisection.
inline double bisect(const Fn& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::runtime_error("oracle::bisect: no sign change");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// q = 0, alpha = pi: phi = sin(kx)/k and the right condition reads
/// sin(k pi) cos(beta) + k cos(k pi) sin(beta) = 0 with k in (n, n + 1].
inline double free_k_beta(int n, double beta) {
  if (beta == 0.0) return n + 1.0;
  auto f = [&](double k) { return std::sin(k * pi) * std::cos(beta) + k * std::cos(k * pi) * std::sin(beta); };
  return bisect(f, n + 1e-12, n + 1.0);
}

/// q = 0, beta = 0: psi = sin(k(pi - x))/k and the left condition reads
/// sin(k pi) cos(alpha) - k cos(k pi) sin(alpha) = 0 with k in (n, n + 1].
inline double free_k_alpha(int n, double alpha) {
  if (alpha == pi) return n + 1.0;
  auto g = [&](double k) { return std::sin(k * pi) * std::cos(alpha) - k * std::cos(k * pi) * std::sin(alpha); };
  return bisect(g, n + 1e-12, n + 1.0);
}

/// Terminal angle of (y', y) from theta' = cos^2 theta + (mu - q) sin^2 theta,
/// classical RK4 with `steps` steps from 0 to pi, theta(0) = pi - alpha.
inline double rk4_phase(const Fn& q, double mu, double alpha, int steps) {
  auto rhs = [&](double x, double th) {
    const double c = std::cos(th), s = std::sin(th);
    return c * c + (mu - q(x)) * s * s;
  };
  const double h = pi / steps;
  double th = pi - alpha;
  for (int i = 0; i < steps; ++i) {
    const double x = i * h;
    const double k1 = rhs(x, th);
    const double k2 = rhs(x + h / 2, th + h / 2 * k1);
    const double k3 = rhs(x + h / 2, th + h / 2 * k2);
    const double k4 = rhs(x + h, th + h * k3);
    th += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return th;
}

}  // namespace oracle

namespace testing {

/// Error code raised by f, or -1 when it does not throw sturm::Error.
template <class F>
int error_code(F&& f) {
  try {
    f();
  } catch (const sturm::Error& e) {
    return static_cast<int>(e.code());
  } catch (...) {
    return -2;
  }
  return -1;
}

inline int code(sturm::ErrorCode c) { return static_cast<int>(c); }

}  // namespace testing
