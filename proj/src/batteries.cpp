#include "sturm/batteries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"
#include "sturm/spectrum.hpp"

namespace sturm {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

struct MatrixCell {
  const NamedPotential* q;
  double alpha;
  double beta;
  int n;

  std::string label() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s alpha=%.6g beta=%.6g n=%d", q->label.c_str(), alpha, beta, n);
    return buf;
  }
};

std::vector<MatrixCell> enumerate(const TestMatrix& m) {
  std::vector<MatrixCell> cells;
  for (const auto& q : m.potentials) {
    for (double a : m.alphas) {
      for (double b : m.betas) {
        for (int n = 0; n <= m.n_max; ++n) cells.push_back({&q, a, b, n});
      }
    }
  }
  return cells;
}

// Runs `check` for every matrix cell; each returns one or more cases.
template <class Check>
BatteryReport run_matrix(const std::string& name, const TestMatrix& m, Check check) {
  const auto cells = enumerate(m);
  std::vector<std::shared_ptr<const Mesh>> meshes;
  for (const auto& q : m.potentials) meshes.push_back(Mesh::build(q.q, m.cells));
  std::vector<std::vector<BatteryCase>> results(cells.size());
  parallel_for(cells.size(), [&](size_t i) {
    const MatrixCell& c = cells[i];
    const auto mesh = meshes[static_cast<size_t>(c.q - m.potentials.data())];
    try {
      const Eigenpair pair = find_eigenvalue(mesh, c.q->q, c.n, BoundaryParams(c.alpha, c.beta));
      results[i] = check(c, pair);
    } catch (const std::exception& e) {
      results[i] = {{c.label(), false, 0.0, e.what()}};
    }
  });
  BatteryReport report{name, {}};
  for (auto& r : results) report.cases.insert(report.cases.end(), r.begin(), r.end());
  return report;
}

bool exact_kind(const Potential& q) {
  return q.kind() == PotentialKind::zero || q.kind() == PotentialKind::constant;
}

}  // namespace

std::vector<NamedPotential> standard_potentials() {
  return {
      {"zero", Potential::zero()},
      {"constant5", Potential::constant(5.0)},
      {"cos2x", Potential::cosine(1.0, 2.0)},
      {"step10[1,2]", Potential::step(10.0, 1.0, 2.0)},
      {"x^-0.5", Potential::power(1.0, -0.5)},
  };
}

TestMatrix TestMatrix::standard() {
  TestMatrix m;
  m.potentials = standard_potentials();
  m.alphas = {kPi / 4, kPi / 2, 3 * kPi / 4, kPi};
  m.betas = {0.0, kPi / 4, kPi / 2, 3 * kPi / 4};
  return m;
}

TestMatrix TestMatrix::single(NamedPotential q) {
  TestMatrix m = standard();
  m.potentials = {std::move(q)};
  return m;
}

size_t TestMatrix::case_count() const {
  return potentials.size() * alphas.size() * betas.size() * static_cast<size_t>(n_max + 1);
}

bool BatteryReport::all_pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const BatteryCase& c) { return c.pass; });
}

size_t BatteryReport::failures() const {
  return static_cast<size_t>(std::count_if(cases.begin(), cases.end(), [](const BatteryCase& c) { return !c.pass; }));
}

double BatteryReport::worst_residual() const {
  double w = 0.0;
  for (const auto& c : cases) w = std::max(w, c.residual);
  return w;
}

double relocate_zero(const SolutionTrajectory& traj, double guess) {
  double x = guess;
  for (int iter = 0; iter < 60; ++iter) {
    const DenseState d = traj.at(x);
    if (d.state[0] == 0.0) break;
    const double step = d.state[0] / d.state[1];
    x -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

BatteryReport run_theorem1(const TestMatrix& m) {
  return run_matrix("theorem1", m, [](const MatrixCell& c, const Eigenpair& pair) {
    const bool left_pin = pins_endpoint(Side::left, c.alpha);
    const bool right_pin = pins_endpoint(Side::right, c.beta);
    const int interior = pair.interior_zero_count();
    const bool has_left = !pair.zeros.empty() && pair.zeros.front() == 0.0;
    const bool has_right = !pair.zeros.empty() && pair.zeros.back() == kPi;
    const int expected_total = c.n + (left_pin ? 1 : 0) + (right_pin ? 1 : 0);
    const bool pass = interior == c.n && has_left == left_pin && has_right == right_pin &&
                      static_cast<int>(pair.zeros.size()) == expected_total;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "interior=%d total=%zu expected_total=%d", interior, pair.zeros.size(),
                  expected_total);
    return std::vector<BatteryCase>{{c.label(), pass, std::abs(interior - c.n) * 1.0, detail}};
  });
}

BatteryReport run_velocities(const TestMatrix& m, double tolerance) {
  constexpr double h = 1e-6;
  return run_matrix("velocities", m, [&](const MatrixCell& c, const Eigenpair& pair) {
    std::vector<BatteryCase> out;
    for (VelocitySide side : {VelocitySide::phi, VelocitySide::psi}) {
      const EndpointConditions ic = side == VelocitySide::phi ? pair.boundary.left() : pair.boundary.right();
      const auto zeros = eigen_zeros(c.q->q, pair, side);
      const SolutionTrajectory up = propagate(pair.mesh, pair.mu + h, ic);
      const SolutionTrajectory down = propagate(pair.mesh, pair.mu - h, ic);
      auto difference = [&](const ZeroRecord& z, double step, const SolutionTrajectory* u,
                            const SolutionTrajectory* d) {
        auto shifted = [&](double dmu) { return relocate_zero(propagate(pair.mesh, pair.mu + dmu, ic), z.x); };
        const double xu = u ? relocate_zero(*u, z.x) : shifted(step);
        const double xd = d ? relocate_zero(*d, z.x) : shifted(-step);
        if (z.x != 0.0 && z.x != kPi) return (xu - xd) / (2 * step);
        // one-sided second order difference from the side that stays in [0, pi]
        const bool use_up = xu >= 0.0 && xu <= kPi;
        const double s = use_up ? 1.0 : -1.0;
        return s * (4 * (use_up ? xu : xd) - shifted(2 * s * step) - 3 * shifted(0.0)) / (2 * step);
      };
      for (const ZeroRecord& z : zeros) {
        const bool launch_pinned = z.pinned && ((side == VelocitySide::phi && z.x == 0.0) ||
                                                (side == VelocitySide::psi && z.x == kPi));
        double fd = launch_pinned ? 0.0 : difference(z, h, &up, &down);
        // fast zeros move far within h; shrink the step so the displacement stays small
        if (!launch_pinned && std::abs(fd) > 1.0) fd = difference(z, h / std::sqrt(std::abs(fd)), nullptr, nullptr);
        const bool sign_ok = side == VelocitySide::phi ? z.velocity <= 0.0 : z.velocity >= 0.0;
        const bool strict_ok = launch_pinned ? z.velocity == 0.0 : z.velocity != 0.0;
        const double rel = launch_pinned ? std::abs(z.velocity) : std::abs(z.velocity - fd) / std::abs(fd);
        BatteryCase bc;
        bc.label = c.label() + (side == VelocitySide::phi ? " phi" : " psi") + " k=" + std::to_string(z.k);
        bc.residual = rel;
        bc.pass = sign_ok && strict_ok && rel <= tolerance;
        bc.detail = fmt("analytic=%.17g fd=%.17g", z.velocity, fd);
        out.push_back(std::move(bc));
      }
    }
    return out;
  });
}

BatteryReport run_identities(const TestMatrix& m) {
  return run_matrix("identities", m, [](const MatrixCell& c, const Eigenpair& pair) {
    const double tol = exact_kind(c.q->q) ? 1e-12 : 1e-8;
    std::vector<BatteryCase> out;
    for (VelocitySide side : {VelocitySide::phi, VelocitySide::psi}) {
      const SolutionTrajectory traj =
          propagate(pair.mesh, pair.mu, side == VelocitySide::phi ? pair.boundary.left() : pair.boundary.right());
      double worst = 0.0;
      for (int j = 1; j <= 8; ++j) worst = std::max(worst, relative_identity_residual(traj, j * kPi / 9));
      // y' ydot = int_0^x y^2 (phi) and -y' ydot = int_x^pi y^2 (psi) at the zeros
      const auto zeros = find_zeros(traj, side == VelocitySide::phi ? pair.boundary.beta : pair.boundary.alpha);
      double worst_zero = 0.0;
      for (const ZeroRecord& z : zeros) {
        const double lhs = (side == VelocitySide::phi ? 1.0 : -1.0) * z.slope * z.ydot;
        worst_zero = std::max(worst_zero, std::abs(lhs - z.launch_integral) / std::max(1.0, z.launch_integral));
      }
      const std::string tag = side == VelocitySide::phi ? " phi" : " psi";
      out.push_back({c.label() + tag + " probes", worst <= tol, worst, fmt("max relative residual %.3g", worst)});
      out.push_back({c.label() + tag + " zeros", worst_zero <= 1e-8, worst_zero,
                     fmt("max relative residual %.3g", worst_zero)});
    }
    return out;
  });
}

BatteryReport run_proportionality(const TestMatrix& m) {
  return run_matrix("proportionality", m, [](const MatrixCell& c, const Eigenpair& pair) {
    const SolutionTrajectory phi = propagate(pair.mesh, pair.mu, pair.boundary.left());
    const SolutionTrajectory psi = propagate(pair.mesh, pair.mu, pair.boundary.right());
    const double res = proportionality_residual(phi, psi, pair.c_n);
    return std::vector<BatteryCase>{
        {c.label(), res <= 1e-8 && pair.c_n != 0.0, res, fmt("c_n=%.17g residual=%.3g", pair.c_n, res)}};
  });
}

BatteryReport run_evf_monotonicity(const std::vector<NamedPotential>& potentials, int points, int cells) {
  BatteryReport report{"evf-monotonicity", {}};
  std::vector<double> gammas, deltas;
  for (int i = 0; i < points; ++i) {
    gammas.push_back(0.25 + (4 * kPi - 0.25) * i / (points - 1));
    deltas.push_back(-3 * kPi + (3.9 * kPi) * i / (points - 1));
  }
  for (const auto& q : potentials) {
    BatteryCase bc;
    bc.label = q.label + " " + std::to_string(points) + "x" + std::to_string(points);
    try {
      const Eigen::MatrixXd grid = evf_grid(q.q, gammas, deltas, {cells});
      double min_step = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        for (Eigen::Index j = 0; j < grid.cols(); ++j) {
          if (i > 0) min_step = std::min(min_step, grid(i, j) - grid(i - 1, j));
          if (j > 0) min_step = std::min(min_step, grid(i, j - 1) - grid(i, j));
        }
      }
      bc.pass = true;
      bc.residual = min_step;
      bc.detail = fmt("smallest monotone step %.6g", min_step);
    } catch (const std::exception& e) {
      bc.pass = false;
      bc.detail = e.what();
    }
    report.cases.push_back(std::move(bc));
  }
  return report;
}

BatteryReport run_seam(const std::vector<NamedPotential>& potentials, int n_max, double offset, double tolerance,
                       int cells) {
  BatteryReport report{"seam", {}};
  for (const auto& q : potentials) {
    const auto mesh = Mesh::build(q.q, cells);
    for (int n = 1; n <= n_max; ++n) {
      BatteryCase bc;
      bc.label = q.label + " n=" + std::to_string(n);
      try {
        const double near = find_eigenvalue(mesh, q.q, n, BoundaryParams(kPi, kPi - offset)).mu;
        const double below = find_eigenvalue(mesh, q.q, n - 1, BoundaryParams(kPi, 0.0)).mu;
        bc.residual = std::abs(near - below);
        bc.pass = bc.residual <= tolerance;
        bc.detail = fmt("mu_n(pi, pi-offset)=%.12g mu_{n-1}(pi, 0)=%.12g", near, below);
      } catch (const std::exception& e) {
        bc.detail = e.what();
      }
      report.cases.push_back(std::move(bc));
    }
  }
  return report;
}

}  // namespace sturm
