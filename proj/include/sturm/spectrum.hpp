#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "sturm/potential.hpp"
#include "sturm/shooting.hpp"

namespace sturm {

/// Separated boundary conditions
///   y(0) cos(alpha) + y'(0) sin(alpha) = 0,   alpha in (0, pi]
///   y(pi) cos(beta) + y'(pi) sin(beta) = 0,   beta in [0, pi)
struct BoundaryParams {
  double alpha;
  double beta;

  BoundaryParams(double alpha, double beta);

  EndpointConditions left() const { return EndpointConditions::left(alpha); }
  EndpointConditions right() const { return EndpointConditions::right(beta); }
};

/// Point of the eigenvalues-function chart, gamma = alpha + pi n and
/// delta = beta - pi m.
struct EvfCoordinates {
  double gamma;
  double delta;

  struct Decomposition {
    double alpha;
    int n;
    double beta;
    int m;
  };

  /// Unique (alpha, n, beta, m). Throws DomainMismatch for gamma < 1e-8 or
  /// delta >= pi.
  Decomposition decompose() const;
  static EvfCoordinates compose(double alpha, int n, double beta, int m);
};

struct SolverOptions {
  int cells = kDefaultCells;
};

struct Eigenpair {
  int n = 0;
  double mu = 0.0;
  BoundaryParams boundary{3.141592653589793, 0.0};
  /// phi_n = c_n psi_n
  double c_n = 0.0;
  /// Zeros of phi_n in [0, pi], ascending; endpoints only when pinned.
  std::vector<double> zeros;
  /// Final bisection bracket; mu always lies inside it.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int newton_steps = 0;
  std::shared_ptr<const Mesh> mesh;

  int interior_zero_count() const;
};

/// Psi(mu) = psi(0) cos(alpha) + psi'(0) sin(alpha) and its mu-derivative, in
/// units of 2^exponent (sign and zero set do not depend on the scale).
struct CharacteristicValue {
  double value;
  double derivative;
  int exponent;

  double unscaled() const;
};

CharacteristicValue characteristic(std::shared_ptr<const Mesh> mesh, double mu, const BoundaryParams& bc);
CharacteristicValue characteristic(const Potential& q, double mu, const BoundaryParams& bc,
                                   int cells = kDefaultCells);

/// n-th eigenvalue (0-based, increasing) located by terminal-phase bisection
/// and polished by bracket-safeguarded Newton on Psi.
Eigenpair find_eigenvalue(const Potential& q, int n, const BoundaryParams& bc, const SolverOptions& opts = {});
Eigenpair find_eigenvalue(std::shared_ptr<const Mesh> mesh, const Potential& q, int n, const BoundaryParams& bc);

double evf(const Potential& q, const EvfCoordinates& coords, const SolverOptions& opts = {});

/// M(i, j) = evf(gamma_i, delta_j). Throws MonotonicityViolationError if a row
/// is not strictly decreasing or a column not strictly increasing.
Eigen::MatrixXd evf_grid(const Potential& q, const std::vector<double>& gammas,
                         const std::vector<double>& deltas, const SolverOptions& opts = {});

}  // namespace sturm
