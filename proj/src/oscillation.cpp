#include "sturm/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sturm/cell_basis.hpp"
#include "sturm/errors.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;
// Numerical zeros this close to a pinned endpoint are the pinned zero itself.
constexpr double kPinnedMerge = 1e-9;
constexpr double kSlopeFloor = 1e-10;
constexpr double kZeroTol = 1e-12;

struct CellView {
  const SolutionTrajectory& traj;
  Eigen::Index cell;
  Eigen::Index base;
  double omega;
  Eigen::Vector4d start;

  CellView(const SolutionTrajectory& t, Eigen::Index c)
      : traj(t),
        cell(c),
        base(t.direction() == Direction::left_to_right ? c : c + 1),
        omega(t.mu() - t.mesh().averages[c]),
        start(t.scaled_states().col(base)) {}

  // y and y' at x, in the base node's scale.
  Eigen::Vector2d eval(double x) const {
    double c, s;
    basis_cs(omega, x - traj.node(base), c, s);
    return {c * start[0] + s * start[1], -omega * s * start[0] + c * start[1]};
  }
};

double polish_zero(const CellView& view, double lo, double hi, double ylo) {
  double x = lo + 0.5 * (hi - lo);
  for (int iter = 0; iter < 100; ++iter) {
    const Eigen::Vector2d v = view.eval(x);
    if (v[0] == 0.0) return x;
    if ((v[0] < 0.0) == (ylo < 0.0)) {
      lo = x;
      ylo = v[0];
    } else {
      hi = x;
    }
    double next = x - v[0] / v[1];
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = lo + 0.5 * (hi - lo);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 4e-16 * std::max(1.0, std::abs(x)) || hi - lo <= 4e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

ZeroRecord make_record(const SolutionTrajectory& traj, double x, bool pinned) {
  const DenseState d = traj.at(x);
  ZeroRecord z;
  z.x = x;
  z.pinned = pinned;
  z.side = traj.direction() == Direction::left_to_right ? VelocitySide::phi : VelocitySide::psi;
  const Eigen::Vector4d s = d.state;
  const Eigen::Vector2d base = traj.scaled_states().col(traj.direction() == Direction::left_to_right ? d.cell : d.cell + 1).head<2>();
  if (std::abs(s[1]) < kSlopeFloor * base.norm()) {
    throw Error(ErrorCode::SlopeUnderflow, "derivative vanishes at a zero near x=" + std::to_string(x));
  }
  z.slope = std::ldexp(s[1], d.exponent);
  z.ydot = std::ldexp(s[2], d.exponent);
  z.launch_integral = d.unscaled_integral();
  if (pinned && ((z.side == VelocitySide::phi && x == 0.0) || (z.side == VelocitySide::psi && x == kPi))) {
    z.velocity = 0.0;
  } else {
    // -(1/y'^2) int_0^x y^2 on the phi side, (1/y'^2) int_x^pi y^2 on the psi side
    const double v = d.integral / (s[1] * s[1]);
    z.velocity = z.side == VelocitySide::phi ? -v : v;
  }
  return z;
}

}  // namespace

std::vector<ZeroRecord> find_zeros(const SolutionTrajectory& traj, std::optional<double> far_angle) {
  const Mesh& mesh = traj.mesh();
  const bool forward = traj.direction() == Direction::left_to_right;
  const bool launch_pinned = traj.launch().pinned();
  bool far_pinned = false;
  if (far_angle) far_pinned = pins_endpoint(forward ? Side::right : Side::left, *far_angle);
  const bool pinned_left = forward ? launch_pinned : far_pinned;
  const bool pinned_right = forward ? far_pinned : launch_pinned;

  std::vector<double> xs;
  for (Eigen::Index c = 0; c < mesh.cells(); ++c) {
    const CellView view(traj, c);
    const double a = mesh.nodes[c], b = mesh.nodes[c + 1];
    int pieces = 1;
    if (view.omega > 0.0) {
      const double phase_span = std::sqrt(view.omega) * (b - a);
      if (phase_span >= 1.5) pieces = static_cast<int>(std::ceil(phase_span / 1.5));
    }
    double u = a;
    double yu = view.eval(u)[0];
    for (int p = 1; p <= pieces; ++p) {
      const double v = p == pieces ? b : a + (b - a) * p / pieces;
      const double yv = view.eval(v)[0];
      if (yv == 0.0 && yu != 0.0) {
        xs.push_back(v);
      } else if (yu != 0.0 && yv != 0.0 && (yu < 0.0) != (yv < 0.0)) {
        xs.push_back(polish_zero(view, u, v, yu));
      }
      u = v;
      yu = yv;
    }
  }

  std::vector<ZeroRecord> out;
  if (pinned_left) out.push_back(make_record(traj, 0.0, true));
  for (double x : xs) {
    if (x <= 0.0 || x >= kPi) continue;
    if (pinned_left && x <= kPinnedMerge) continue;
    if (pinned_right && x >= kPi - kPinnedMerge) continue;
    out.push_back(make_record(traj, x, false));
  }
  if (pinned_right) out.push_back(make_record(traj, kPi, true));

  const int count = static_cast<int>(out.size());
  for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)].k = forward ? i : count - 1 - i;
  return out;
}

std::vector<ZeroRecord> eigen_zeros(const Potential& q, const Eigenpair& pair, VelocitySide side) {
  auto mesh = pair.mesh ? pair.mesh : Mesh::build(q);
  if (side == VelocitySide::phi) {
    return find_zeros(propagate(mesh, pair.mu, pair.boundary.left()), pair.boundary.beta);
  }
  return find_zeros(propagate(mesh, pair.mu, pair.boundary.right()), pair.boundary.alpha);
}

int count_interior_zeros(const Potential& q, int n, const BoundaryParams& bc, const SolverOptions& opts) {
  const Eigenpair pair = find_eigenvalue(q, n, bc, opts);
  const int found = pair.interior_zero_count();
  if (found != n) throw CountMismatchError(n, found);
  return found;
}

namespace {

double velocity_at(const Potential& q, const Eigenpair& pair, int k, VelocitySide side) {
  const auto zeros = eigen_zeros(q, pair, side);
  for (const ZeroRecord& z : zeros) {
    if (z.k == k) return z.velocity;
  }
  throw Error(ErrorCode::IndexOutOfRange,
              "zero ordinal " + std::to_string(k) + " out of range (" + std::to_string(zeros.size()) + " zeros)");
}

}  // namespace

double zero_velocity_phi(const Potential& q, const Eigenpair& pair, int k) {
  return velocity_at(q, pair, k, VelocitySide::phi);
}

double zero_velocity_psi(const Potential& q, const Eigenpair& pair, int k) {
  return velocity_at(q, pair, k, VelocitySide::psi);
}

double proportionality_constant(const SolutionTrajectory& phi, const SolutionTrajectory& psi) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double v = std::abs(psi.state(i)[0]);
    if (v > best_abs) {
      best_abs = v;
      best = i;
    }
  }
  const double scale = psi.launch().initial_values().norm();
  if (!(best_abs > 1e-12 * scale)) {
    throw Error(ErrorCode::DegenerateRatio, "psi vanishes on the whole mesh");
  }
  return phi.state(best)[0] / psi.state(best)[0];
}

double proportionality_constant(const Potential& q, const Eigenpair& pair) {
  auto mesh = pair.mesh ? pair.mesh : Mesh::build(q);
  return proportionality_constant(propagate(mesh, pair.mu, pair.boundary.left()),
                                  propagate(mesh, pair.mu, pair.boundary.right()));
}

double proportionality_residual(const SolutionTrajectory& phi, const SolutionTrajectory& psi, double c) {
  double worst = 0.0, peak = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double p = phi.state(i)[0];
    worst = std::max(worst, std::abs(p - c * psi.state(i)[0]));
    peak = std::max(peak, std::abs(p));
  }
  return worst / peak;
}

double identity_residual(const SolutionTrajectory& traj, double a) {
  const DenseState d = traj.at(a);
  const Eigen::Vector4d& s = d.state;
  const double w_a = s[1] * s[2] - s[3] * s[0];
  const bool forward = traj.direction() == Direction::left_to_right;
  const Eigen::Vector4d l = traj.scaled_states().col(forward ? 0 : traj.size() - 1);
  const double w_launch = l[1] * l[2] - l[3] * l[0];
  if (forward) return std::abs(std::ldexp(w_a - d.integral, 2 * d.exponent) - w_launch);
  return std::abs(std::ldexp(-w_a - d.integral, 2 * d.exponent) + w_launch);
}

double relative_identity_residual(const SolutionTrajectory& traj, double a) {
  // evaluated in the scaled units of the node so that huge states stay finite
  const DenseState d = traj.at(a);
  const Eigen::Vector4d& s = d.state;
  const double unit = std::ldexp(1.0, -2 * d.exponent);
  const bool forward = traj.direction() == Direction::left_to_right;
  const Eigen::Vector4d l = traj.scaled_states().col(forward ? 0 : traj.size() - 1);
  const double w_launch = (l[1] * l[2] - l[3] * l[0]) * unit;
  const double w_a = s[1] * s[2] - s[3] * s[0];
  const double diff = forward ? w_a - d.integral - w_launch : -w_a - d.integral + w_launch;
  return std::abs(diff) / std::max(unit, d.integral);
}

}  // namespace sturm
