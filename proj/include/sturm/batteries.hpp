#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sturm/potential.hpp"
#include "sturm/shooting.hpp"

namespace sturm {

struct NamedPotential {
  std::string label;
  Potential q;
};

/// zero, constant 5, cos 2x, step 10 on [1, 2], x^(-1/2).
std::vector<NamedPotential> standard_potentials();

struct TestMatrix {
  std::vector<NamedPotential> potentials;
  std::vector<double> alphas;  // default {pi/4, pi/2, 3pi/4, pi}
  std::vector<double> betas;   // default {0, pi/4, pi/2, 3pi/4}
  int n_max = 8;
  int cells = kDefaultCells;

  static TestMatrix standard();
  static TestMatrix single(NamedPotential q);
  size_t case_count() const;
};

struct BatteryCase {
  std::string label;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

struct BatteryReport {
  std::string battery;
  std::vector<BatteryCase> cases;

  bool all_pass() const;
  size_t failures() const;
  double worst_residual() const;
};

/// Interior zero count = n and endpoint zeros exactly at pinned ends.
BatteryReport run_theorem1(const TestMatrix& m);

/// Integral-formula zero velocities against central differences of re-solved
/// zero locations (mu +- 1e-6), both sides, with sign checks.
BatteryReport run_velocities(const TestMatrix& m, double tolerance = 1e-4);

/// Integrated Wronskian-type identity at 8 interior probe points of phi_n and
/// psi_n, plus y' * ydot = +-int y^2 at every zero.
BatteryReport run_identities(const TestMatrix& m);

/// max |phi_n - c_n psi_n| <= 1e-8 max |phi_n|.
BatteryReport run_proportionality(const TestMatrix& m);

/// Strict monotonicity of the eigenvalues function on a points x points grid.
BatteryReport run_evf_monotonicity(const std::vector<NamedPotential>& potentials, int points = 16,
                                   int cells = kDefaultCells);

/// |mu_n(q, pi, pi - offset) - mu_{n-1}(q, pi, 0)| <= tolerance for n = 1..n_max.
BatteryReport run_seam(const std::vector<NamedPotential>& potentials, int n_max = 5, double offset = 1e-4,
                       double tolerance = 1e-3, int cells = kDefaultCells);

/// Zero of the trajectory nearest to `guess`, by Newton on the closed form
/// (may leave [0, pi] through the boundary cells).
double relocate_zero(const SolutionTrajectory& traj, double guess);

}  // namespace sturm
