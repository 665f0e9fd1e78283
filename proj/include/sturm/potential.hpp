#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace sturm {

namespace kinds {

struct Zero {};

struct Constant {
  double c = 0.0;
};

/// a * cos(f * x)
struct Cosine {
  double a = 1.0;
  double f = 1.0;
};

/// v on [l, r], zero elsewhere.
struct Step {
  double v = 0.0;
  double l = 0.0;
  double r = 0.0;
};

/// a * x^p with p > -1.
struct Power {
  double a = 1.0;
  double p = 0.0;
};

/// Piecewise-linear interpolant through (x_i, q_i), x_0 = 0 and x_last = pi.
struct Table {
  Eigen::VectorXd x;
  Eigen::VectorXd q;
};

}  // namespace kinds

enum class PotentialKind { zero, constant, cosine, step, power, table };

/// A real potential q in L^1[0, pi]. Immutable after construction; all
/// constructors validate and throw sturm::Error on bad parameters.
class Potential {
 public:
  using Params =
      std::variant<kinds::Zero, kinds::Constant, kinds::Cosine, kinds::Step, kinds::Power, kinds::Table>;

  explicit Potential(Params params);

  static Potential zero() { return Potential(kinds::Zero{}); }
  static Potential constant(double c) { return Potential(kinds::Constant{c}); }
  static Potential cosine(double a, double f) { return Potential(kinds::Cosine{a, f}); }
  static Potential step(double v, double l, double r) { return Potential(kinds::Step{v, l, r}); }
  static Potential power(double a, double p) { return Potential(kinds::Power{a, p}); }
  static Potential table(std::vector<double> x, std::vector<double> q);

  PotentialKind kind() const;
  std::string name() const;
  const Params& params() const { return params_; }
  double l1_norm() const { return l1_norm_; }

  /// Exact integral of q over [a, b] (0 <= a <= b <= pi).
  double integral(double a, double b) const;

  /// Pointwise value; +-inf at a power singularity.
  double value(double x) const;

  /// True when q is unbounded near x = 0 (power kind with negative exponent).
  bool singular_at_origin() const;

 private:
  Params params_;
  double l1_norm_ = 0.0;
};

/// Mean of q over [a, b]; defined even when q is unbounded inside.
double eval_cell_average(const Potential& q, double a, double b);

/// Parses {"kind": ..., params} (JSON). Throws sturm::Error with codes
/// UnknownKind, NonIntegrableExponent, NonMonotoneTable, DomainMismatch or
/// InvalidArgument.
Potential parse_potential(std::string_view document);

/// Serializes back to the JSON form accepted by parse_potential.
std::string to_json(const Potential& q);

}  // namespace sturm
