#include "sturm/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sturm/cell_basis.hpp"
#include "sturm/errors.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSnap = 1e-14;

// Rescaling thresholds for the overflow guard; shifts are powers of two so
// rescaling is exact.
constexpr double kScaleHigh = 1e150;
constexpr double kScaleLow = 1e-150;
constexpr int kScaleShift = 500;

// Half-turns of the phase of (y', y) accumulated across one cell, derived from
// the same computed end state that the caller uses for the residual angle.
int half_turns(double y0, double yp0, double y1, double yp1, double omega, double t) {
  if (omega > 0.0) {
    const double r = std::sqrt(omega);
    if (r * std::abs(t) >= 3.0) {
      // more than one zero possible: count with the uniformly rotating angle of (y', r y)
      const double p0 = line_angle(r * y0, yp0);
      const double p1 = line_angle(r * y1, yp1);
      return static_cast<int>(std::lround((p0 + r * t - p1) / kPi));
    }
  }
  // at most one zero in the cell
  const bool crossed = y0 != 0.0 && y1 != 0.0 && (y0 < 0.0) != (y1 < 0.0);
  if (t > 0.0) return (crossed || (y1 == 0.0 && y0 != 0.0)) ? 1 : 0;
  return (crossed || y0 == 0.0) ? -1 : 0;
}

struct StepOrder {
  Eigen::Index cells;
  bool forward;
  Eigen::Index cell(Eigen::Index k) const { return forward ? k : cells - 1 - k; }
  Eigen::Index from(Eigen::Index c) const { return forward ? c : c + 1; }
  Eigen::Index to(Eigen::Index c) const { return forward ? c + 1 : c; }
};

}  // namespace

double line_angle(double y, double yp) {
  double r = std::atan2(y, yp);
  if (r < 0.0) r += kPi;
  // a tiny nonzero y can round the angle up to pi; it still lies below pi
  if (r >= kPi) r = y == 0.0 ? 0.0 : std::nextafter(kPi, 0.0);
  return r;
}

AngleTrig exact_trig(double angle) {
  if (std::abs(angle) <= kAngleSnap) return {0.0, 1.0};
  if (std::abs(angle - kPi) <= kAngleSnap) return {0.0, -1.0};
  if (std::abs(angle - kPi / 2) <= kAngleSnap) return {1.0, 0.0};
  return {std::sin(angle), std::cos(angle)};
}

bool pins_endpoint(Side side, double angle) {
  return side == Side::left ? std::abs(angle - kPi) <= kAngleSnap : std::abs(angle) <= kAngleSnap;
}

EndpointConditions::EndpointConditions(Side side, double angle) : side_(side), angle_(angle) {
  const bool ok = side == Side::left ? (angle > 0.0 && angle <= kPi + kAngleSnap)
                                     : (angle >= -kAngleSnap && angle < kPi);
  if (!ok || !std::isfinite(angle)) {
    throw Error(ErrorCode::InvalidArgument, side == Side::left
                                                ? "left angle alpha must lie in (0, pi]"
                                                : "right angle beta must lie in [0, pi)");
  }
}

Eigen::Vector2d EndpointConditions::initial_values() const {
  const AngleTrig tr = exact_trig(angle_);
  return {tr.sin, -tr.cos};
}

double EndpointConditions::initial_phase() const {
  if (pinned()) return side_ == Side::left ? 0.0 : kPi;
  return kPi - angle_;
}

Eigen::Vector4d DenseState::unscaled() const {
  return state.unaryExpr([this](double v) { return std::ldexp(v, exponent); });
}

double DenseState::unscaled_integral() const { return std::ldexp(integral, 2 * exponent); }

Eigen::Index Mesh::locate(double x) const {
  const double* begin = nodes.data();
  const double* end = begin + nodes.size();
  const Eigen::Index i = (std::upper_bound(begin, end, x) - begin) - 1;
  return std::clamp<Eigen::Index>(i, 0, cells() - 1);
}

std::shared_ptr<const Mesh> Mesh::build(const Potential& q, int cells) {
  if (cells < kMinCells) {
    throw Error(ErrorCode::MeshTooCoarse,
                "need at least " + std::to_string(kMinCells) + " cells, got " + std::to_string(cells));
  }
  const double h = kPi / cells;
  std::vector<double> nodes;
  nodes.reserve(cells + kSingularRefinement + 1);
  nodes.push_back(0.0);
  if (q.singular_at_origin()) {
    for (int j = kSingularRefinement; j >= 1; --j) nodes.push_back(std::ldexp(h, -j));
  }
  for (int i = 1; i < cells; ++i) nodes.push_back(kPi * i / cells);
  nodes.push_back(kPi);

  auto mesh = std::make_shared<Mesh>();
  mesh->nodes = Eigen::Map<const Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  mesh->averages.resize(mesh->nodes.size() - 1);
  for (Eigen::Index i = 0; i < mesh->averages.size(); ++i) {
    mesh->averages[i] = eval_cell_average(q, mesh->nodes[i], mesh->nodes[i + 1]);
  }
  return mesh;
}

SolutionTrajectory::SolutionTrajectory(std::shared_ptr<const Mesh> mesh, double mu, EndpointConditions launch)
    : mesh_(std::move(mesh)), mu_(mu), launch_(launch) {}

Eigen::Vector4d SolutionTrajectory::state(Eigen::Index i) const {
  const int e = exponents_[static_cast<size_t>(i)];
  return states_.col(i).unaryExpr([e](double v) { return std::ldexp(v, e); });
}

double SolutionTrajectory::integral(Eigen::Index i) const {
  return std::ldexp(integrals_[i], 2 * exponents_[static_cast<size_t>(i)]);
}

double SolutionTrajectory::terminal_phase() const {
  return direction() == Direction::left_to_right ? phases_[phases_.size() - 1] : phases_[0];
}

bool SolutionTrajectory::rescaled() const {
  return std::any_of(exponents_.begin(), exponents_.end(), [](int e) { return e != 0; });
}

DenseState SolutionTrajectory::at(double x) const {
  const bool forward = direction() == Direction::left_to_right;
  DenseState out;
  out.cell = mesh_->locate(x);
  const Eigen::Index base = forward ? out.cell : out.cell + 1;
  const double t = x - mesh_->nodes[base];
  const double omega = mu_ - mesh_->averages[out.cell];
  const CellBasis<double> b = cell_basis(omega, t);
  const Eigen::Vector4d s = states_.col(base);
  out.state = cell_propagator(b, omega) * s;
  const double inc = cell_square_integral(b, s[0], s[1]);
  out.integral = integrals_[base] + (forward ? inc : -inc);
  out.exponent = exponents_[static_cast<size_t>(base)];
  return out;
}

SolutionTrajectory propagate(std::shared_ptr<const Mesh> mesh, double mu, const EndpointConditions& ic) {
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite");
  SolutionTrajectory traj(mesh, mu, ic);
  const Eigen::Index cells = mesh->cells();
  const StepOrder order{cells, ic.side() == Side::left};

  traj.states_.resize(4, cells + 1);
  traj.exponents_.assign(static_cast<size_t>(cells + 1), 0);
  traj.integrals_.resize(cells + 1);
  traj.phases_.resize(cells + 1);

  const Eigen::Vector2d iv = ic.initial_values();
  Eigen::Vector4d s(iv[0], iv[1], 0.0, 0.0);
  double cum = 0.0;
  int exponent = 0;
  double theta = ic.initial_phase();
  double r_prev = line_angle(s[0], s[1]);

  const Eigen::Index start = order.forward ? 0 : cells;
  traj.states_.col(start) = s;
  traj.integrals_[start] = 0.0;
  traj.phases_[start] = theta;

  for (Eigen::Index k = 0; k < cells; ++k) {
    const Eigen::Index c = order.cell(k);
    const Eigen::Index dst = order.to(c);
    const double t = mesh->nodes[dst] - mesh->nodes[order.from(c)];
    const double omega = mu - mesh->averages[c];
    const CellBasis<double> b = cell_basis(omega, t);
    Eigen::Vector4d next = cell_propagator(b, omega) * s;
    const double inc = cell_square_integral(b, s[0], s[1]);
    cum += order.forward ? inc : -inc;
    if (!next.allFinite() || !std::isfinite(cum)) throw NonFiniteError(static_cast<int>(c), mu);

    const double r_next = line_angle(next[0], next[1]);
    theta += r_next - r_prev + kPi * half_turns(s[0], s[1], next[0], next[1], omega, t);
    r_prev = r_next;

    const double m = next.cwiseAbs().maxCoeff();
    if (m > kScaleHigh || cum > kScaleHigh * kScaleHigh) {
      next *= std::ldexp(1.0, -kScaleShift);
      cum *= std::ldexp(1.0, -2 * kScaleShift);
      exponent += kScaleShift;
    } else if (m < kScaleLow && cum < 1e-10) {
      next *= std::ldexp(1.0, kScaleShift);
      cum *= std::ldexp(1.0, 2 * kScaleShift);
      exponent -= kScaleShift;
    }
    s = next;
    traj.states_.col(dst) = s;
    traj.integrals_[dst] = cum;
    traj.exponents_[static_cast<size_t>(dst)] = exponent;
    traj.phases_[dst] = theta;
  }
  return traj;
}

SolutionTrajectory propagate(const Potential& q, double mu, const EndpointConditions& ic, int cells) {
  return propagate(Mesh::build(q, cells), mu, ic);
}

PhaseRecord phase_at_far_end(const Mesh& mesh, double mu, const EndpointConditions& ic) {
  if (!std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite");
  const Eigen::Index cells = mesh.cells();
  const StepOrder order{cells, ic.side() == Side::left};
  const Eigen::Vector2d iv = ic.initial_values();
  double y = iv[0], yp = iv[1];
  const double r_start = line_angle(y, yp);
  long turns = 0;
  for (Eigen::Index k = 0; k < cells; ++k) {
    const Eigen::Index c = order.cell(k);
    const double t = mesh.nodes[order.to(c)] - mesh.nodes[order.from(c)];
    const double omega = mu - mesh.averages[c];
    double cc, ss;
    basis_cs(omega, t, cc, ss);
    double y1 = cc * y + ss * yp;
    double yp1 = -omega * ss * y + cc * yp;
    if (!std::isfinite(y1) || !std::isfinite(yp1)) throw NonFiniteError(static_cast<int>(c), mu);
    turns += half_turns(y, yp, y1, yp1, omega, t);
    const double m = std::max(std::abs(y1), std::abs(yp1));
    if (m > kScaleHigh) {
      y1 = std::ldexp(y1, -kScaleShift);
      yp1 = std::ldexp(yp1, -kScaleShift);
    } else if (m < kScaleLow) {
      y1 = std::ldexp(y1, kScaleShift);
      yp1 = std::ldexp(yp1, kScaleShift);
    }
    y = y1;
    yp = yp1;
  }
  const double theta = ic.initial_phase() - r_start + line_angle(y, yp) + kPi * static_cast<double>(turns);
  return {mu, theta, ic.direction()};
}

PhaseRecord phase_at_far_end(const Potential& q, double mu, const EndpointConditions& ic, int cells) {
  return phase_at_far_end(*Mesh::build(q, cells), mu, ic);
}

}  // namespace sturm
