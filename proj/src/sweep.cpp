#include "sturm/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

#include "sturm/errors.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEventWidth = 1e-8;
constexpr double kEndpointZero = 1e-10;
constexpr int kRefineFactor = 4;

SweepSample solve_angle(const SweepPlan& plan, const std::shared_ptr<const Mesh>& mesh, double angle) {
  const BoundaryParams bc = plan.boundary_at(angle);
  const Eigenpair pair = find_eigenvalue(mesh, plan.q, plan.n, bc);
  SweepSample s{angle, pair.mu, {}, 0};
  if (plan.vary == SweepVariable::beta) {
    s.zeros = pair.zeros;
  } else {
    for (const ZeroRecord& z : eigen_zeros(plan.q, pair, VelocitySide::psi)) s.zeros.push_back(z.x);
  }
  const bool left_pinned = pins_endpoint(Side::left, bc.alpha);
  const bool right_pinned = pins_endpoint(Side::right, bc.beta);
  s.interior_count = static_cast<int>(std::count_if(s.zeros.begin(), s.zeros.end(), [&](double x) {
    return !(x == 0.0 && left_pinned) && !(x == kPi && right_pinned);
  }));
  return s;
}

std::vector<SweepSample> solve_grid(const SweepPlan& plan, const std::vector<double>& grid) {
  const auto mesh = Mesh::build(plan.q, plan.cells);
  std::vector<SweepSample> samples(grid.size());
  parallel_for(grid.size(), [&](size_t i) { samples[i] = solve_angle(plan, mesh, grid[i]); });
  return samples;
}

size_t nearest(const std::vector<double>& xs, double x) {
  size_t best = 0;
  for (size_t i = 1; i < xs.size(); ++i) {
    if (std::abs(xs[i] - x) < std::abs(xs[best] - x)) best = i;
  }
  return best;
}

// Endpoint through which an unlinked zero enters or leaves, if it is the
// extreme zero on that side and within `guard` of the endpoint.
std::optional<Side> boundary_side(const std::vector<double>& xs, size_t i, double guard) {
  const double x = xs[i];
  const bool near_left = i == 0 && x <= guard;
  const bool near_right = i + 1 == xs.size() && kPi - x <= guard;
  if (near_left && near_right) return x <= kPi - x ? Side::left : Side::right;
  if (near_left) return Side::left;
  if (near_right) return Side::right;
  return std::nullopt;
}

SweepResult link(const SweepPlan& plan, std::vector<SweepSample> samples) {
  SweepResult out;
  out.samples = std::move(samples);
  const auto& s = out.samples;

  std::vector<int> active;  // trajectory id per zero of the previous sample
  auto start_trajectory = [&](size_t sample, size_t zero) {
    ZeroTrajectory t;
    t.id = static_cast<int>(out.trajectories.size());
    const size_t count = s[sample].zeros.size();
    t.identity = static_cast<int>(plan.vary == SweepVariable::beta ? zero : count - 1 - zero);
    t.points.emplace_back(s[sample].angle, s[sample].zeros[zero]);
    out.trajectories.push_back(std::move(t));
    return out.trajectories.back().id;
  };
  for (size_t j = 0; j < s.front().zeros.size(); ++j) active.push_back(start_trajectory(0, j));

  for (size_t step = 1; step < s.size(); ++step) {
    const auto& prev = s[step - 1].zeros;
    const auto& cur = s[step].zeros;
    // half the smallest gap between neighbouring zeros bounds a legal move
    double guard = kPi / 4;
    if (prev.size() >= 2) {
      guard = std::numeric_limits<double>::infinity();
      for (size_t i = 1; i < prev.size(); ++i) guard = std::min(guard, 0.5 * (prev[i] - prev[i - 1]));
    }

    std::vector<int> link_prev(prev.size(), -1), link_cur(cur.size(), -1);
    if (!prev.empty() && !cur.empty()) {
      for (size_t i = 0; i < prev.size(); ++i) {
        const size_t j = nearest(cur, prev[i]);
        if (nearest(prev, cur[j]) == i && std::abs(cur[j] - prev[i]) <= guard) {
          link_prev[i] = static_cast<int>(j);
          link_cur[j] = static_cast<int>(i);
        }
      }
    }

    const double lo = s[step - 1].angle, hi = s[step].angle;
    std::vector<int> next_active(cur.size(), -1);
    for (size_t i = 0; i < prev.size(); ++i) {
      auto& traj = out.trajectories[static_cast<size_t>(active[i])];
      if (link_prev[i] >= 0) {
        const auto j = static_cast<size_t>(link_prev[i]);
        traj.points.emplace_back(hi, cur[j]);
        next_active[j] = traj.id;
        continue;
      }
      const auto side = boundary_side(prev, i, guard);
      if (!side) throw LinkAmbiguityError(hi, kRefineFactor);
      const SweepEvent e{*side == Side::left ? EndpointEvent::exited_at_left : EndpointEvent::exited_at_right, lo, hi,
                         traj.id};
      traj.events.push_back(e);
      out.events.push_back(e);
    }
    for (size_t j = 0; j < cur.size(); ++j) {
      if (link_cur[j] >= 0) continue;
      const auto side = boundary_side(cur, j, guard);
      if (!side) throw LinkAmbiguityError(hi, kRefineFactor);
      const int id = start_trajectory(step, j);
      const SweepEvent e{*side == Side::left ? EndpointEvent::entered_at_left : EndpointEvent::entered_at_right, lo,
                         hi, id};
      out.trajectories[static_cast<size_t>(id)].events.push_back(e);
      out.events.push_back(e);
      next_active[j] = id;
    }
    active = std::move(next_active);
  }

  for (size_t i = 1; i < s.size(); ++i) {
    const bool ok = plan.vary == SweepVariable::beta ? s[i].mu < s[i - 1].mu : s[i].mu > s[i - 1].mu;
    if (!ok) out.path_violations.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace

const char* to_string(EndpointEvent e) {
  switch (e) {
    case EndpointEvent::entered_at_left: return "entered_at_left";
    case EndpointEvent::exited_at_right: return "exited_at_right";
    case EndpointEvent::entered_at_right: return "entered_at_right";
    case EndpointEvent::exited_at_left: return "exited_at_left";
  }
  return "unknown";
}

Side endpoint_of(EndpointEvent e) {
  return (e == EndpointEvent::entered_at_left || e == EndpointEvent::exited_at_left) ? Side::left : Side::right;
}

bool is_entry(EndpointEvent e) {
  return e == EndpointEvent::entered_at_left || e == EndpointEvent::entered_at_right;
}

bool ZeroTrajectory::monotone(double tol) const {
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].second < points[i - 1].second - tol) return false;
  }
  return true;
}

void SweepPlan::validate() const {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue index must be nonnegative");
  if (grid.size() < static_cast<size_t>(kMinSweepPoints)) {
    throw Error(ErrorCode::InvalidArgument, "sweep grid needs at least " + std::to_string(kMinSweepPoints) +
                                                " points, got " + std::to_string(grid.size()));
  }
  if (cells < kMinCells) throw Error(ErrorCode::MeshTooCoarse, "sweep resolution below minimum cell count");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "sweep grid must be strictly increasing");
  }
  // angle ranges are checked by the boundary conditions
  (void)boundary_at(grid.front());
  (void)boundary_at(grid.back());
}

BoundaryParams SweepPlan::boundary_at(double angle) const {
  return vary == SweepVariable::beta ? BoundaryParams(fixed_angle, angle) : BoundaryParams(angle, fixed_angle);
}

std::vector<double> SweepPlan::uniform_grid(double lo, double hi, int points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  std::vector<double> g(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

SweepResult run_sweep(const SweepPlan& plan) {
  plan.validate();
  SweepResult result = link(plan, solve_grid(plan, plan.grid));
  if (!plan.refine_events || result.events.empty()) return result;

  std::set<double> extra;
  for (const SweepEvent& e : result.events) {
    for (int k = 1; k < kRefineFactor; ++k) extra.insert(e.angle_lo + (e.angle_hi - e.angle_lo) * k / kRefineFactor);
  }
  std::vector<double> added(extra.begin(), extra.end());
  std::vector<SweepSample> fresh = solve_grid(plan, added);
  std::vector<SweepSample> merged = std::move(result.samples);
  merged.insert(merged.end(), fresh.begin(), fresh.end());
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
  return link(plan, std::move(merged));
}

double endpoint_value(const SweepPlan& plan, double angle, Side endpoint) {
  const BoundaryParams bc = plan.boundary_at(angle);
  const auto mesh = Mesh::build(plan.q, plan.cells);
  const Eigenpair pair = find_eigenvalue(mesh, plan.q, plan.n, bc);
  // phase of (y', y) at the far end: y / |(y, y')| = +-sin(theta)
  const PhaseRecord far = endpoint == Side::right ? phase_at_far_end(*mesh, pair.mu, bc.left())
                                                  : phase_at_far_end(*mesh, pair.mu, bc.right());
  return std::sin(far.theta_terminal);
}

AngleBracket detect_transition(const SweepPlan& plan, const SweepEvent& event) {
  plan.validate();
  const Side side = endpoint_of(event.kind);
  auto present = [&](double angle) { return std::abs(endpoint_value(plan, angle, side)) <= kEndpointZero; };
  double lo = event.angle_lo, hi = event.angle_hi;
  const bool entry = is_entry(event.kind);
  const bool lo_present = present(lo), hi_present = present(hi);
  if (!(lo < hi) || lo_present == entry || hi_present != entry) {
    throw Error(ErrorCode::EventNotFound, std::string(to_string(event.kind)) + " not found in [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  while (hi - lo > kEventWidth) {
    const double mid = lo + 0.5 * (hi - lo);
    if (present(mid) == lo_present) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace sturm
