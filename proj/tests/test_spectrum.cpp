#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sturm/batteries.hpp"
#include "sturm/spectrum.hpp"

using namespace sturm;
using oracle::pi;
using testing::code;
using testing::error_code;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double free_psi(double mu, double alpha, double beta) {
  // q = 0 right-launched solution evaluated at 0, mu > 0
  const double k = std::sqrt(mu);
  const double y = std::sin(beta) * std::cos(k * pi) + std::cos(beta) * std::sin(k * pi) / k;
  const double yp = std::sin(beta) * k * std::sin(k * pi) - std::cos(beta) * std::cos(k * pi);
  return y * std::cos(alpha) + yp * std::sin(alpha);
}

}  // namespace

TEST_CASE("boundary params validate") {
  CHECK(error_code([] { BoundaryParams(0.0, 0.0); }) == code(ErrorCode::InvalidArgument));
  CHECK(error_code([] { BoundaryParams(pi, pi); }) == code(ErrorCode::InvalidArgument));
  CHECK(error_code([] { BoundaryParams(pi, 0.0); }) == -1);
}

TEST_CASE("characteristic function examples") {
  const Potential q = Potential::zero();
  CHECK(std::abs(characteristic(q, 1.0, {pi, 0.0}).unscaled()) < 1e-14);
  CHECK(std::abs(characteristic(q, 2.25, {pi, pi / 2}).unscaled()) < 1e-14);
  const double closed = -std::sin(std::sqrt(2.0) * pi) / std::sqrt(2.0);
  CHECK(std::abs(characteristic(q, 2.0, {pi, 0.0}).unscaled() - closed) < 1e-9);
  for (double mu : {0.3, 5.0, 12.7}) {
    for (double a : {0.5, pi / 2, pi}) {
      for (double b : {0.0, 1.0, 2.5}) {
        CHECK(std::abs(characteristic(q, mu, {a, b}).unscaled() - free_psi(mu, a, b)) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed-form spectra") {
  const Potential zero = Potential::zero();
  for (int n = 0; n <= 20; ++n) {
    const double mu = find_eigenvalue(zero, n, {pi, 0.0}).mu;
    INFO("n=", n);
    CHECK(std::abs(mu - (n + 1.0) * (n + 1.0)) <= 1e-9 * (n + 1.0) * (n + 1.0));
  }
  for (int n = 0; n <= 10; ++n) {
    CHECK(std::abs(find_eigenvalue(zero, n, {pi / 2, pi / 2}).mu - n * n) <= 1e-9 * std::max(1, n * n));
    CHECK(std::abs(find_eigenvalue(zero, n, {pi, pi / 2}).mu - (n + 0.5) * (n + 0.5)) <= 1e-9 * (n + 1) * (n + 1));
    CHECK(std::abs(find_eigenvalue(Potential::constant(5.0), n, {pi, 0.0}).mu - ((n + 1.0) * (n + 1.0) + 5.0)) <=
          1e-9 * ((n + 1.0) * (n + 1.0) + 5.0));
  }
}

TEST_CASE("cos 2x ground state against the matrix oracle") {
  const auto t = oracle::dirichlet_matrix([](double x) { return std::cos(2 * x); }, 20000);
  const double ref = oracle::matrix_eigenvalue(t, 0);
  const double mu = find_eigenvalue(Potential::cosine(1.0, 2.0), 0, {pi, 0.0}).mu;
  CHECK(std::abs(mu - ref) < 1e-5 * std::abs(ref));
}

TEST_CASE("eigenvalues are strictly ordered") {
  for (const auto& [label, q] : standard_potentials()) {
    for (auto bc : {BoundaryParams(pi, 0.0), BoundaryParams(pi / 4, pi / 2), BoundaryParams(2.0, 2.5)}) {
      double prev = -1e300;
      for (int n = 0; n <= 10; ++n) {
        const Eigenpair p = find_eigenvalue(q, n, bc);
        INFO(label, " n=", n);
        CHECK(p.mu > prev);
        prev = p.mu;
      }
    }
  }
}

TEST_CASE("bracket brackets a sign change and contains the polished value") {
  for (const auto& [label, q] : standard_potentials()) {
    const auto mesh = Mesh::build(q);
    for (auto bc : {BoundaryParams(pi, 0.0), BoundaryParams(pi / 3, pi / 5), BoundaryParams(3 * pi / 4, 0.0)}) {
      for (int n : {0, 1, 4, 8}) {
        const Eigenpair p = find_eigenvalue(mesh, q, n, bc);
        INFO(label, " n=", n);
        CHECK(p.bracket_lo <= p.mu);
        CHECK(p.mu <= p.bracket_hi);
        CHECK(p.bracket_hi - p.bracket_lo <= 1e-12 * std::max(1.0, std::abs(p.mu)) * 1.0000001);
        CHECK(p.newton_steps <= 5);
        // widen past roundoff so the sign of Psi is decided
        const double w = 1e-9 * std::max(1.0, std::abs(p.mu));
        const double lo = characteristic(mesh, p.mu - w, bc).value;
        const double hi = characteristic(mesh, p.mu + w, bc).value;
        CHECK((lo > 0) != (hi > 0));
        CHECK(p.c_n != 0.0);
      }
    }
  }
}

TEST_CASE("evf decomposition") {
  auto d = EvfCoordinates{2 * pi, 0.0}.decompose();
  CHECK(d.alpha == doctest::Approx(pi));
  CHECK(d.n == 1);
  CHECK(d.beta == 0.0);
  CHECK(d.m == 0);
  d = EvfCoordinates{pi, -pi}.decompose();
  CHECK(d.n == 0);
  CHECK(d.m == 1);
  CHECK(d.beta == 0.0);
  d = EvfCoordinates{0.5, -0.5}.decompose();
  CHECK(d.n == 0);
  CHECK(d.m == 1);
  CHECK(d.beta == doctest::Approx(pi - 0.5));
  for (double g : {0.1, 1.0, pi, 7.0, 9.42}) {
    for (double dl : {3.0, 0.0, -0.2, -pi, -8.0}) {
      const auto x = EvfCoordinates{g, dl}.decompose();
      CHECK(x.alpha > 0.0);
      CHECK(x.alpha <= pi);
      CHECK(x.beta >= 0.0);
      CHECK(x.beta < pi);
      const auto back = EvfCoordinates::compose(x.alpha, x.n, x.beta, x.m);
      CHECK(back.gamma == doctest::Approx(g).epsilon(1e-14));
      CHECK(back.delta == doctest::Approx(dl).epsilon(1e-14));
    }
  }
  CHECK(error_code([] { EvfCoordinates{1e-9, 0.0}.decompose(); }) == code(ErrorCode::DomainMismatch));
  CHECK(error_code([] { EvfCoordinates{1.0, pi}.decompose(); }) == code(ErrorCode::DomainMismatch));
}

TEST_CASE("evf examples") {
  const Potential q = Potential::zero();
  CHECK(rel(evf(q, {2 * pi, 0.0}), 4.0) < 1e-12);
  CHECK(rel(evf(q, {pi, -pi}), 4.0) < 1e-12);
  CHECK(std::abs(evf(q, {pi / 2, pi / 2})) < 1e-12);
}

TEST_CASE("evf grid examples") {
  const Potential q = Potential::zero();
  const Eigen::MatrixXd col = evf_grid(q, {pi / 2, pi, 3 * pi / 2}, {0.0});
  CHECK(col(0, 0) < col(1, 0));
  CHECK(col(1, 0) < col(2, 0));

  const Eigen::MatrixXd row = evf_grid(q, {pi}, {-pi, -pi / 2, 0.0});
  // delta = -pi/2 is beta = pi/2 with m = 1: k from the Dirichlet-Neumann equation
  const double k = oracle::free_k_beta(1, pi / 2);
  CHECK(rel(row(0, 0), 4.0) < 1e-12);
  CHECK(rel(row(0, 1), k * k) < 1e-12);
  CHECK(rel(row(0, 2), 1.0) < 1e-12);
  CHECK(rel(row(0, 1), 2.25) < 1e-12);

  CHECK(error_code([&] { evf_grid(q, {pi, pi / 2}, {0.0}); }) == code(ErrorCode::InvalidArgument));
  CHECK(error_code([&] { evf_grid(q, {pi}, {0.0, -1.0}); }) == code(ErrorCode::InvalidArgument));
}

TEST_CASE("evf grid for the singular potential") {
  const Potential q = Potential::power(1.0, -0.5);
  // both gammas and deltas land on alpha = pi, beta = 0: Dirichlet indices n + m
  const Eigen::MatrixXd m = evf_grid(q, {pi, 2 * pi}, {-pi, 0.0});
  const auto t = oracle::dirichlet_matrix([](double x) { return 1.0 / std::sqrt(x); }, 20000);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::isfinite(m(i, j)));
      const double ref = oracle::matrix_eigenvalue(t, i + 1 - j);
      INFO("i=", i, " j=", j, " mu=", m(i, j), " oracle=", ref);
      CHECK(std::abs(m(i, j) - ref) < 1e-4 * ref);
    }
  }
  CHECK(m(0, 0) < m(1, 0));
  CHECK(m(0, 1) < m(1, 1));
  CHECK(m(0, 0) > m(0, 1));
  CHECK(m(1, 0) > m(1, 1));
}

TEST_CASE("chart seam converges linearly in the offset") {
  // q = 0: mu_n(pi, pi - e) - n^2 behaves like 2 n^2 e / pi
  for (int n = 1; n <= 5; ++n) {
    double prev_gap = 0.0;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const double gap = find_eigenvalue(Potential::zero(), n, {pi, pi - e}).mu - n * n;
      const double k = oracle::free_k_beta(n, pi - e);
      INFO("n=", n, " e=", e);
      CHECK(gap > 0.0);
      CHECK(std::abs(gap - (k * k - n * n)) < 1e-9 * n * n);
      if (e < 1e-3) CHECK(gap / e == doctest::Approx(2.0 * n * n / pi).epsilon(1e-2));
      if (prev_gap > 0.0) CHECK(gap < prev_gap);
      prev_gap = gap;
    }
  }
  // the gamma side: mu(pi + e, delta) -> mu(pi, delta)
  for (const auto& [label, q] : standard_potentials()) {
    const double at = evf(q, {pi, 0.0});
    const double near1 = evf(q, {pi + 1e-3, 0.0}) - at;
    const double near2 = evf(q, {pi + 1e-4, 0.0}) - at;
    INFO(label);
    CHECK(near1 > near2);
    CHECK(near2 > 0.0);
    CHECK(near2 < 0.2 * near1);
  }
}

TEST_CASE("bracket failure reports probe bounds") {
  BracketFailureError e(-3.0, 10.0, 2);
  CHECK(e.code() == ErrorCode::BracketFailure);
  CHECK(std::string(e.what()).find("-3") != std::string::npos);
}
