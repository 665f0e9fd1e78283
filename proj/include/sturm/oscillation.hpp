#pragma once

#include <optional>
#include <vector>

#include "sturm/potential.hpp"
#include "sturm/shooting.hpp"
#include "sturm/spectrum.hpp"

namespace sturm {

/// phi: zeros of the left-launched solution, velocity -(1/y'^2) int_0^x y^2.
/// psi: zeros of the right-launched solution, velocity (1/y'^2) int_x^pi y^2.
enum class VelocitySide { phi, psi };

struct ZeroRecord {
  double x = 0.0;
  /// phi side: ascending from x = 0; psi side: descending from x = pi.
  int k = 0;
  double slope = 0.0;
  /// dx/dmu from the integral formula of the launch side.
  double velocity = 0.0;
  VelocitySide side = VelocitySide::phi;
  /// Endpoint zero fixed by a boundary angle.
  bool pinned = false;
  /// dy/dmu at the zero and int y^2 between the launch endpoint and the zero.
  double ydot = 0.0;
  double launch_integral = 0.0;
};

/// All zeros of the trajectory on [0, pi], sorted ascending. The launch
/// endpoint is a zero iff its angle pins it; the far endpoint is a zero iff
/// far_angle is given and pins it (beta = 0 for left launches, alpha = pi for
/// right launches). Throws SlopeUnderflow on a numerically double zero.
std::vector<ZeroRecord> find_zeros(const SolutionTrajectory& traj, std::optional<double> far_angle = std::nullopt);

/// Zeros strictly inside (0, pi) of the n-th eigenfunction; throws
/// CountMismatchError unless the count equals n.
int count_interior_zeros(const Potential& q, int n, const BoundaryParams& bc, const SolverOptions& opts = {});

/// Zero records of phi_n (left launch) or psi_n (right launch) at pair.mu.
std::vector<ZeroRecord> eigen_zeros(const Potential& q, const Eigenpair& pair, VelocitySide side);

double zero_velocity_phi(const Potential& q, const Eigenpair& pair, int k);
double zero_velocity_psi(const Potential& q, const Eigenpair& pair, int k);

/// c_n = phi_n(x*) / psi_n(x*) with x* the mesh node maximizing |psi_n|.
double proportionality_constant(const SolutionTrajectory& phi, const SolutionTrajectory& psi);
double proportionality_constant(const Potential& q, const Eigenpair& pair);

/// max_nodes |phi - c psi| / max_nodes |phi|.
double proportionality_residual(const SolutionTrajectory& phi, const SolutionTrajectory& psi, double c);

/// |LHS - RHS| of the integrated Wronskian-type identity at a:
///   left launch:  [y' ydot - ydot' y]_0^a = int_0^a y^2
///   right launch: [y' ydot - ydot' y]_a^pi = int_a^pi y^2
double identity_residual(const SolutionTrajectory& traj, double a);

/// Same, divided by max(1, int y^2).
double relative_identity_residual(const SolutionTrajectory& traj, double a);

}  // namespace sturm
