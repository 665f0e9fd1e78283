#include "sturm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sturm/errors.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBracketTol = 1e-12;
constexpr double kNewtonTol = 1e-13;
constexpr int kNewtonCap = 5;
constexpr int kBracketExpansions = 8;
constexpr double kMinGamma = 1e-8;

}  // namespace

BoundaryParams::BoundaryParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  // validated through the endpoint conditions
  (void)left();
  (void)right();
}

EvfCoordinates::Decomposition EvfCoordinates::decompose() const {
  if (!(gamma >= kMinGamma) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::DomainMismatch, "gamma must be at least 1e-8");
  }
  if (!(delta < kPi) || !std::isfinite(delta)) throw Error(ErrorCode::DomainMismatch, "delta must be below pi");
  int n = static_cast<int>(std::ceil(gamma / kPi)) - 1;
  double alpha = gamma - kPi * n;
  if (alpha > kPi) {
    ++n;
    alpha = gamma - kPi * n;
  } else if (alpha <= 0.0) {
    --n;
    alpha = gamma - kPi * n;
  }
  int m = std::max(0, static_cast<int>(std::ceil(-delta / kPi)));
  double beta = delta + kPi * m;
  if (beta >= kPi) {
    --m;
    beta = delta + kPi * m;
  } else if (beta < 0.0) {
    ++m;
    beta = delta + kPi * m;
  }
  return {alpha, n, beta, m};
}

EvfCoordinates EvfCoordinates::compose(double alpha, int n, double beta, int m) {
  return {alpha + kPi * n, beta - kPi * m};
}

int Eigenpair::interior_zero_count() const {
  return static_cast<int>(std::count_if(zeros.begin(), zeros.end(), [this](double x) {
    const bool at_left = x == 0.0 && pins_endpoint(Side::left, boundary.alpha);
    const bool at_right = x == kPi && pins_endpoint(Side::right, boundary.beta);
    return !at_left && !at_right;
  }));
}

double CharacteristicValue::unscaled() const { return std::ldexp(value, exponent); }

CharacteristicValue characteristic(std::shared_ptr<const Mesh> mesh, double mu, const BoundaryParams& bc) {
  const SolutionTrajectory psi = propagate(std::move(mesh), mu, bc.right());
  const AngleTrig tr = exact_trig(bc.alpha);
  const Eigen::Vector4d s = psi.scaled_states().col(0);
  return {s[0] * tr.cos + s[1] * tr.sin, s[2] * tr.cos + s[3] * tr.sin, psi.exponents().front()};
}

CharacteristicValue characteristic(const Potential& q, double mu, const BoundaryParams& bc, int cells) {
  return characteristic(Mesh::build(q, cells), mu, bc);
}

Eigenpair find_eigenvalue(std::shared_ptr<const Mesh> mesh, const Potential& q, int n, const BoundaryParams& bc) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue index must be nonnegative");
  const EndpointConditions left = bc.left();
  const double beta = pins_endpoint(Side::right, bc.beta) ? 0.0 : bc.beta;
  const double target = (n + 1) * kPi - beta;
  auto phase = [&](double mu) { return phase_at_far_end(*mesh, mu, left).theta_terminal; };

  double lo = mesh->min_average() - 1.0;
  double hi = static_cast<double>(n + 2) * (n + 2) + q.l1_norm() + 1.0;
  bool lo_ok = phase(lo) < target;
  bool hi_ok = phase(hi) > target;
  for (int i = 0; i < kBracketExpansions && !(lo_ok && hi_ok); ++i) {
    const double width = hi - lo;
    if (!lo_ok) {
      lo -= width;
      lo_ok = phase(lo) < target;
    }
    if (!hi_ok) {
      hi += width;
      hi_ok = phase(hi) > target;
    }
  }
  if (!(lo_ok && hi_ok)) throw BracketFailureError(lo, hi, n);

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= kBracketTol * std::max(1.0, std::abs(mid)) || mid <= lo || mid >= hi) break;
    if (phase(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  Eigenpair pair;
  pair.n = n;
  pair.boundary = bc;
  pair.bracket_lo = lo;
  pair.bracket_hi = hi;
  pair.mesh = mesh;
  double mu = lo + 0.5 * (hi - lo);
  for (int iter = 0; iter < kNewtonCap; ++iter) {
    const CharacteristicValue cv = characteristic(mesh, mu, bc);
    if (cv.derivative == 0.0) break;
    const double step = -cv.value / cv.derivative;
    if (!std::isfinite(step)) break;
    const double next = mu + step;
    if (next < lo || next > hi) break;
    mu = next;
    ++pair.newton_steps;
    if (std::abs(step) <= kNewtonTol * std::max(1.0, std::abs(mu))) break;
  }
  pair.mu = mu;

  const SolutionTrajectory phi = propagate(mesh, mu, left);
  const SolutionTrajectory psi = propagate(mesh, mu, bc.right());
  for (const ZeroRecord& z : find_zeros(phi, bc.beta)) pair.zeros.push_back(z.x);
  pair.c_n = proportionality_constant(phi, psi);
  return pair;
}

Eigenpair find_eigenvalue(const Potential& q, int n, const BoundaryParams& bc, const SolverOptions& opts) {
  return find_eigenvalue(Mesh::build(q, opts.cells), q, n, bc);
}

double evf(const Potential& q, const EvfCoordinates& coords, const SolverOptions& opts) {
  const auto d = coords.decompose();
  return find_eigenvalue(q, d.n + d.m, BoundaryParams(d.alpha, d.beta), opts).mu;
}

Eigen::MatrixXd evf_grid(const Potential& q, const std::vector<double>& gammas,
                         const std::vector<double>& deltas, const SolverOptions& opts) {
  for (size_t i = 1; i < gammas.size(); ++i) {
    if (!(gammas[i] > gammas[i - 1])) throw Error(ErrorCode::InvalidArgument, "gamma grid must be strictly increasing");
  }
  for (size_t j = 1; j < deltas.size(); ++j) {
    if (!(deltas[j] > deltas[j - 1])) throw Error(ErrorCode::InvalidArgument, "delta grid must be strictly increasing");
  }
  const auto rows = static_cast<Eigen::Index>(gammas.size());
  const auto cols = static_cast<Eigen::Index>(deltas.size());
  for (double g : gammas) (void)EvfCoordinates{g, 0.0}.decompose();
  for (double d : deltas) (void)EvfCoordinates{kPi, d}.decompose();

  const auto mesh = Mesh::build(q, opts.cells);
  Eigen::MatrixXd out(rows, cols);
  parallel_for(static_cast<size_t>(rows * cols), [&](size_t idx) {
    const Eigen::Index i = static_cast<Eigen::Index>(idx) / cols;
    const Eigen::Index j = static_cast<Eigen::Index>(idx) % cols;
    const auto d = EvfCoordinates{gammas[static_cast<size_t>(i)], deltas[static_cast<size_t>(j)]}.decompose();
    out(i, j) = find_eigenvalue(mesh, q, d.n + d.m, BoundaryParams(d.alpha, d.beta)).mu;
  });

  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (i > 0 && !(out(i, j) > out(i - 1, j))) {
        throw MonotonicityViolationError(static_cast<int>(i), static_cast<int>(j), "gamma");
      }
      if (j > 0 && !(out(i, j) < out(i, j - 1))) {
        throw MonotonicityViolationError(static_cast<int>(i), static_cast<int>(j), "delta");
      }
    }
  }
  return out;
}

}  // namespace sturm
