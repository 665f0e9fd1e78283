#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sturm/batteries.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/spectrum.hpp"

using namespace sturm;
using oracle::pi;
using testing::code;
using testing::error_code;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// central difference of the zero near x under mu -> mu +- h
double fd_velocity(const Eigenpair& p, const EndpointConditions& ic, double x, double h = 1e-6) {
  const double up = relocate_zero(propagate(p.mesh, p.mu + h, ic), x);
  const double down = relocate_zero(propagate(p.mesh, p.mu - h, ic), x);
  return (up - down) / (2 * h);
}

}  // namespace

TEST_CASE("zeros of sin((n+1)x)") {
  for (int n = 0; n <= 5; ++n) {
    const double mu = (n + 1.0) * (n + 1.0);
    const auto zs = find_zeros(propagate(Potential::zero(), mu, EndpointConditions::left(pi)), 0.0);
    REQUIRE(zs.size() == static_cast<size_t>(n + 2));
    for (int k = 0; k <= n + 1; ++k) {
      CHECK(zs[k].k == k);
      CHECK(std::abs(zs[k].x - pi * k / (n + 1)) <= 1e-10);
    }
    CHECK(zs.front().pinned);
    CHECK(zs.back().pinned);
  }
}

TEST_CASE("zeros of cos(nx)") {
  for (int n = 1; n <= 6; ++n) {
    const auto zs = find_zeros(propagate(Potential::zero(), 1.0 * n * n, EndpointConditions::left(pi / 2)));
    REQUIRE(zs.size() == static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) CHECK(std::abs(zs[k].x - (k + 0.5) * pi / n) <= 1e-10);
  }
}

TEST_CASE("zero count agrees with the eigenvector oracle") {
  const Potential q = Potential::cosine(1.0, 2.0);
  const Eigenpair p = find_eigenvalue(q, 3, {pi, 0.0});
  const auto zs = find_zeros(propagate(p.mesh, p.mu, EndpointConditions::left(pi)), 0.0);
  int interior = 0;
  for (const auto& z : zs) interior += z.x > 0.0 && z.x < pi;
  const auto t = oracle::dirichlet_matrix([](double x) { return std::cos(2 * x); }, 2000);
  CHECK(interior == oracle::eigenvector_sign_changes(t, 3));
  CHECK(interior == 3);
  CHECK(zs.size() == 5);
  CHECK(zs.front().x == 0.0);
  CHECK(zs.back().x == pi);
}

TEST_CASE("count_interior_zeros examples") {
  CHECK(count_interior_zeros(Potential::zero(), 4, {pi, 0.0}) == 4);
  CHECK(count_interior_zeros(Potential::power(1.0, -0.5), 4, {pi / 3, pi / 5}) == 4);
  CHECK(count_interior_zeros(Potential::step(10.0, 1.0, 2.0), 0, {pi / 2, pi / 2}) == 0);
  CountMismatchError e(3, 2);
  CHECK(e.code() == ErrorCode::CountMismatch);
}

TEST_CASE("phi velocities for q = 0 Dirichlet") {
  for (int n = 0; n <= 5; ++n) {
    const Eigenpair p = find_eigenvalue(Potential::zero(), n, {pi, 0.0});
    CHECK(zero_velocity_phi(Potential::zero(), p, 0) == 0.0);
    for (int k = 1; k <= n + 1; ++k) {
      const double expected = -pi * k / (2.0 * std::pow(n + 1.0, 3));
      INFO("n=", n, " k=", k);
      CHECK(rel(zero_velocity_phi(Potential::zero(), p, k), expected) <= 1e-8);
    }
  }
  const Eigenpair p0 = find_eigenvalue(Potential::zero(), 0, {pi, 0.0});
  CHECK(zero_velocity_phi(Potential::zero(), p0, 1) == doctest::Approx(-pi / 2).epsilon(1e-10));
  CHECK(error_code([&] { zero_velocity_phi(Potential::zero(), p0, 2); }) == code(ErrorCode::IndexOutOfRange));
  CHECK(error_code([&] { zero_velocity_psi(Potential::zero(), p0, -1); }) == code(ErrorCode::IndexOutOfRange));
}

TEST_CASE("psi velocities mirror phi for q = 0") {
  const Eigenpair p0 = find_eigenvalue(Potential::zero(), 0, {pi, 0.0});
  // psi ordinals run from pi: k = 0 at pi, k = 1 at 0
  CHECK(zero_velocity_psi(Potential::zero(), p0, 0) == 0.0);
  CHECK(zero_velocity_psi(Potential::zero(), p0, 1) == doctest::Approx(pi / 2).epsilon(1e-10));
  for (int n = 1; n <= 4; ++n) {
    const Eigenpair p = find_eigenvalue(Potential::zero(), n, {pi, 0.0});
    for (int k = 0; k <= n + 1; ++k) {
      CHECK(zero_velocity_psi(Potential::zero(), p, k) ==
            doctest::Approx(-zero_velocity_phi(Potential::zero(), p, k)).epsilon(1e-9));
    }
  }
}

TEST_CASE("velocities against re-solved zeros") {
  const Potential q = Potential::cosine(1.0, 2.0);
  {
    const Eigenpair p = find_eigenvalue(q, 2, {pi, 0.0});
    const auto zs = eigen_zeros(q, p, VelocitySide::phi);
    CHECK(rel(zs[1].velocity, fd_velocity(p, p.boundary.left(), zs[1].x)) < 1e-4);
    CHECK(zs[1].velocity == zero_velocity_phi(q, p, 1));
  }
  {
    const Eigenpair p = find_eigenvalue(q, 2, {pi / 2, pi / 3});
    const auto zs = eigen_zeros(q, p, VelocitySide::psi);
    REQUIRE(zs.size() == 2);
    for (const auto& z : zs) {
      CHECK(z.velocity > 0.0);
      CHECK(rel(z.velocity, fd_velocity(p, p.boundary.right(), z.x)) < 1e-4);
    }
  }
}

TEST_CASE("velocity signs") {
  for (const auto& [label, q] : standard_potentials()) {
    for (auto bc : {BoundaryParams(pi, 0.0), BoundaryParams(pi / 4, 3 * pi / 4), BoundaryParams(pi, pi / 2)}) {
      const Eigenpair p = find_eigenvalue(q, 3, bc);
      for (const auto& z : eigen_zeros(q, p, VelocitySide::phi)) {
        CHECK(z.velocity <= 0.0);
        CHECK((z.velocity == 0.0) == (z.x == 0.0 && z.pinned));
      }
      for (const auto& z : eigen_zeros(q, p, VelocitySide::psi)) {
        CHECK(z.velocity >= 0.0);
        CHECK((z.velocity == 0.0) == (z.x == pi && z.pinned));
      }
    }
  }
}

TEST_CASE("proportionality constants") {
  const Potential zero = Potential::zero();
  CHECK(find_eigenvalue(zero, 0, {pi, 0.0}).c_n == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(find_eigenvalue(zero, 1, {pi, 0.0}).c_n == doctest::Approx(-1.0).epsilon(1e-12));

  const Potential q = Potential::cosine(1.0, 2.0);
  const Eigenpair p = find_eigenvalue(q, 3, {pi / 2, pi / 4});
  const auto phi = propagate(p.mesh, p.mu, p.boundary.left());
  const auto psi = propagate(p.mesh, p.mu, p.boundary.right());
  CHECK(proportionality_constant(q, p) == p.c_n);
  CHECK(proportionality_residual(phi, psi, p.c_n) <= 1e-8);
}

TEST_CASE("identity residual examples") {
  const auto t0 = propagate(Potential::zero(), 1.0, EndpointConditions::left(pi));
  CHECK(identity_residual(t0, pi) <= 1e-12);
  const auto t1 = propagate(Potential::cosine(1.0, 2.0), 7.0, EndpointConditions::left(pi));
  CHECK(identity_residual(t1, pi / 2) < 1e-8);
  const auto t2 = propagate(Potential::step(10.0, 1.0, 2.0), 3.0, EndpointConditions::right(0.9));
  CHECK(identity_residual(t1, 0.0) == 0.0);
  CHECK(identity_residual(t2, pi) == 0.0);
}

TEST_CASE("zero identity at every zero") {
  for (const auto& [label, q] : standard_potentials()) {
    const Eigenpair p = find_eigenvalue(q, 5, {pi / 3, pi / 6});
    for (VelocitySide side : {VelocitySide::phi, VelocitySide::psi}) {
      for (const auto& z : eigen_zeros(q, p, side)) {
        const double lhs = (side == VelocitySide::phi ? 1.0 : -1.0) * z.slope * z.ydot;
        INFO(label, " x=", z.x);
        CHECK(std::abs(lhs - z.launch_integral) <= 1e-8 * std::max(1.0, z.launch_integral));
      }
    }
  }
}
