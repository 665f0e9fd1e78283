#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sturm/potential.hpp"
#include "sturm/shooting.hpp"
#include "sturm/spectrum.hpp"

namespace sturm {

enum class SweepVariable { beta, alpha };

inline constexpr int kDefaultSweepPoints = 64;
inline constexpr int kMinSweepPoints = 8;

/// Sweep of one boundary angle with the other held fixed. Beta sweeps track
/// zeros of phi_n (left launch); alpha sweeps track zeros of psi_n (right
/// launch).
struct SweepPlan {
  Potential q = Potential::zero();
  int n = 0;
  SweepVariable vary = SweepVariable::beta;
  double fixed_angle = 3.141592653589793;
  std::vector<double> grid;
  int cells = kDefaultCells;
  /// Re-solve event intervals at four times the local grid density.
  bool refine_events = true;

  /// Throws InvalidArgument on an invalid plan.
  void validate() const;
  BoundaryParams boundary_at(double angle) const;

  static std::vector<double> uniform_grid(double lo, double hi, int points = kDefaultSweepPoints);
};

enum class EndpointEvent { entered_at_left, exited_at_right, entered_at_right, exited_at_left };

const char* to_string(EndpointEvent e);
Side endpoint_of(EndpointEvent e);
bool is_entry(EndpointEvent e);

struct SweepEvent {
  EndpointEvent kind;
  /// Grid interval in which the event happens.
  double angle_lo;
  double angle_hi;
  int trajectory;
};

struct ZeroTrajectory {
  int id = 0;
  /// Ordinal of the zero (launch-side convention) where the trajectory starts.
  int identity = 0;
  std::vector<std::pair<double, double>> points;  // (angle, x)
  std::vector<SweepEvent> events;

  /// x non-decreasing along the sweep, within `tol`.
  bool monotone(double tol = 1e-12) const;
};

struct SweepSample {
  double angle;
  double mu;
  std::vector<double> zeros;  // ascending, including pinned endpoints
  int interior_count;
};

struct SweepResult {
  std::vector<SweepSample> samples;
  std::vector<ZeroTrajectory> trajectories;
  std::vector<SweepEvent> events;
  /// Indices i where mu(i) fails strict monotonicity against mu(i-1)
  /// (decreasing for beta sweeps, increasing for alpha sweeps).
  std::vector<int> path_violations;

  bool path_monotone() const { return path_violations.empty(); }
};

/// Throws LinkAmbiguityError when zeros cannot be linked between adjacent
/// angles.
SweepResult run_sweep(const SweepPlan& plan);

/// Endpoint value of the swept eigenfunction, normalized by |(y, y')|:
/// phi_n(pi) for Side::right, psi_n(0) for Side::left.
double endpoint_value(const SweepPlan& plan, double angle, Side endpoint);

struct AngleBracket {
  double lo;
  double hi;
};

/// Narrows the grid interval of `event` to width <= 1e-8 by bisection on the
/// endpoint value. Throws EventNotFound if the endpoint zero is not gained or
/// lost across the event interval.
AngleBracket detect_transition(const SweepPlan& plan, const SweepEvent& event);

}  // namespace sturm
