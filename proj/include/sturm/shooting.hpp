#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>

#include "sturm/potential.hpp"

namespace sturm {

inline constexpr int kDefaultCells = 4096;
inline constexpr int kMinCells = 16;
/// Extra geometric cells inserted toward x = 0 for singular power potentials.
inline constexpr int kSingularRefinement = 32;

/// Cell partition of [0, pi] with the potential replaced by its cell means.
struct Mesh {
  Eigen::VectorXd nodes;     // strictly increasing, nodes[0] = 0, nodes[last] = pi
  Eigen::VectorXd averages;  // one per cell

  Eigen::Index cells() const { return averages.size(); }
  double min_average() const { return averages.minCoeff(); }
  /// Index of the cell containing x, clamped to the first/last cell.
  Eigen::Index locate(double x) const;

  /// Uniform mesh of `cells` cells; for potentials singular at the origin the
  /// first cell is split geometrically (ratio 2) into kSingularRefinement + 1
  /// cells. Throws MeshTooCoarse below kMinCells.
  static std::shared_ptr<const Mesh> build(const Potential& q, int cells = kDefaultCells);
};

enum class Side { left, right };
enum class Direction { left_to_right, right_to_left };

/// Exact sine/cosine of a boundary angle; 0, pi/2 and pi map to exact values.
struct AngleTrig {
  double sin;
  double cos;
};
AngleTrig exact_trig(double angle);

/// True when the angle puts a zero of the solution at its endpoint
/// (alpha = pi on the left, beta = 0 on the right).
bool pins_endpoint(Side side, double angle);

/// Launch data y(0) = sin(alpha), y'(0) = -cos(alpha) on the left with
/// alpha in (0, pi]; y(pi) = sin(beta), y'(pi) = -cos(beta) on the right with
/// beta in [0, pi).
class EndpointConditions {
 public:
  EndpointConditions(Side side, double angle);

  static EndpointConditions left(double alpha) { return {Side::left, alpha}; }
  static EndpointConditions right(double beta) { return {Side::right, beta}; }

  Side side() const { return side_; }
  double angle() const { return angle_; }
  Direction direction() const {
    return side_ == Side::left ? Direction::left_to_right : Direction::right_to_left;
  }
  /// (y, y') at the launch endpoint.
  Eigen::Vector2d initial_values() const;
  /// Continuous phase of (y', y) at the launch endpoint: pi - angle.
  double initial_phase() const;
  bool pinned() const { return pins_endpoint(side_, angle_); }

 private:
  Side side_;
  double angle_;
};

/// Scaled state at a point: the true state is state * 2^exponent and the true
/// integral of y^2 from the launch endpoint is integral * 2^(2 exponent).
struct DenseState {
  Eigen::Vector4d state;  // (y, y', dy/dmu, dy'/dmu)
  double integral = 0.0;
  int exponent = 0;
  Eigen::Index cell = 0;

  Eigen::Vector4d unscaled() const;
  double unscaled_integral() const;
};

/// (y, y', dy/dmu, dy'/dmu) sampled on the mesh nodes for one mu and one
/// launch endpoint. Values are stored with a per-node binary exponent so that
/// deep hyperbolic propagation never overflows.
class SolutionTrajectory {
 public:
  SolutionTrajectory(std::shared_ptr<const Mesh> mesh, double mu, EndpointConditions launch);

  double mu() const { return mu_; }
  const EndpointConditions& launch() const { return launch_; }
  Direction direction() const { return launch_.direction(); }
  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }

  Eigen::Index size() const { return mesh_->nodes.size(); }
  double node(Eigen::Index i) const { return mesh_->nodes[i]; }

  /// Scaled node data.
  const Eigen::Matrix<double, 4, Eigen::Dynamic>& scaled_states() const { return states_; }
  const std::vector<int>& exponents() const { return exponents_; }
  const Eigen::VectorXd& scaled_integrals() const { return integrals_; }
  /// Continuous phase of (y', y) at every node.
  const Eigen::VectorXd& phases() const { return phases_; }

  Eigen::Vector4d state(Eigen::Index i) const;
  /// int y^2 between the launch endpoint and node i.
  double integral(Eigen::Index i) const;
  double terminal_phase() const;
  bool rescaled() const;

  /// Closed-form evaluation anywhere in [0, pi]. Points slightly outside the
  /// interval are evaluated with the boundary cell's closed form.
  DenseState at(double x) const;

 private:
  friend SolutionTrajectory propagate(std::shared_ptr<const Mesh>, double, const EndpointConditions&);

  std::shared_ptr<const Mesh> mesh_;
  double mu_;
  EndpointConditions launch_;
  Eigen::Matrix<double, 4, Eigen::Dynamic> states_;
  std::vector<int> exponents_;
  Eigen::VectorXd integrals_;
  Eigen::VectorXd phases_;
};

struct PhaseRecord {
  double mu;
  double theta_terminal;
  Direction direction;
};

SolutionTrajectory propagate(std::shared_ptr<const Mesh> mesh, double mu, const EndpointConditions& ic);
SolutionTrajectory propagate(const Potential& q, double mu, const EndpointConditions& ic,
                             int cells = kDefaultCells);

/// Continuous phase at the far endpoint. Increasing in mu for left launches,
/// decreasing for right launches.
PhaseRecord phase_at_far_end(const Mesh& mesh, double mu, const EndpointConditions& ic);
PhaseRecord phase_at_far_end(const Potential& q, double mu, const EndpointConditions& ic,
                             int cells = kDefaultCells);

/// Angle of the line through (y', y), in [0, pi).
double line_angle(double y, double yp);

}  // namespace sturm
