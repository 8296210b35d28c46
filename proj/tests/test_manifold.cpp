#include <cmath>
#include <sstream>

#include <doctest.h>

#include "nlheat/error.hpp"
#include "nlheat/manifold.hpp"
#include "support.hpp"

using namespace nlheat;
using nlheat::testing::kTwoPi;
using nlheat::testing::random_field;

TEST_CASE("grid construction rejects tiny or degenerate tori") {
  CHECK_THROWS_AS(TorusGrid(3), Error);
  CHECK_THROWS_AS(TorusGrid(8, 0.0), Error);
  CHECK_THROWS_AS(TorusGrid(8, 8, 1.0, -2.0), Error);
  const TorusGrid g(16, 8, 2.0, 1.0);
  CHECK(g.dim() == 2);
  CHECK(g.size() == 128);
  CHECK(g.spacing(0) == doctest::Approx(0.125));
  CHECK(g.volume() == doctest::Approx(2.0));
  CHECK(g.coordinate(17, 0) == doctest::Approx(0.25));  // node (2, 1): axis 0 is slow
  CHECK(g.coordinate(17, 1) == doctest::Approx(0.125));
}

TEST_CASE("field from vector checks its size") {
  CHECK_THROWS_AS(ScalarField(TorusGrid(8), std::vector<double>(7, 0.0)), Error);
  try {
    (void)(ScalarField(TorusGrid(8), 1.0) + ScalarField(TorusGrid(16), 1.0));
    FAIL("mismatched grids accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Structural);
  }
}

TEST_CASE("laplacian of constants vanishes; of sin it is the stencil eigenvalue") {
  for (std::size_t n : {8u, 64u, 128u}) {
    const TorusGrid g(n);
    CHECK(max_abs(laplacian(ScalarField(g, 3.5))) == 0.0);
    const ScalarField s = ScalarField::sample(g, [](double x, double) { return std::sin(kTwoPi * x); });
    const double h = g.spacing(0);
    const double mu = (2.0 / (h * h)) * (1.0 - std::cos(kTwoPi * h));
    CHECK(max_abs(laplacian(s) + mu * s) <= 1e-9 * mu);
    CHECK(discrete_spectral_gap(g) == doctest::Approx(mu).epsilon(1e-14));
  }
}

TEST_CASE("2-D laplacian is the sum of the axis stencils") {
  const TorusGrid g(16, 32, 1.0, 2.0);
  const ScalarField u = ScalarField::sample(g, [](double x, double y) {
    return std::cos(kTwoPi * x) * std::sin(kTwoPi * y / 2.0);
  });
  auto mu = [](double h, double L) { return (2.0 / (h * h)) * (1.0 - std::cos(kTwoPi * h / L)); };
  const double lam = mu(g.spacing(0), 1.0) + mu(g.spacing(1), 2.0);
  CHECK(max_abs(laplacian(u) + lam * u) <= 1e-10 * lam);
  CHECK(discrete_spectral_gap(g) == doctest::Approx(mu(g.spacing(1), 2.0)));
}

TEST_CASE("integration, inner product and norms on known fields") {
  const TorusGrid g(64, 2.0);
  CHECK(integrate(ScalarField(g, 1.5)) == doctest::Approx(3.0));
  const ScalarField s = ScalarField::sample(g, [](double x, double) { return std::sin(kTwoPi * x / 2.0); });
  CHECK(std::abs(integrate(s)) <= 1e-14);
  CHECK(inner(s, s) == doctest::Approx(1.0));  // rectangle rule is exact for trig polynomials
  CHECK(l2_norm(s) == doctest::Approx(1.0));
}

TEST_CASE("summation by parts holds to roundoff on random fields") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    for (const TorusGrid& g : {TorusGrid(64), TorusGrid(16, 16), TorusGrid(12, 20, 0.7, 1.3)}) {
      const ScalarField u = random_field(g, seed);
      const double e = dirichlet(u);
      CHECK(std::abs(inner(u, laplacian(u)) + e) <= 1e-12 * (1.0 + e));
      CHECK(std::abs(integrate(laplacian(u))) <= 1e-12 * (1.0 + e));
      const ScalarField v = random_field(g, seed + 1000);
      // symmetry of the discrete Laplacian
      CHECK(std::abs(inner(u, laplacian(v)) - inner(laplacian(u), v)) <= 1e-12 * (1.0 + e));
    }
  }
}

TEST_CASE("operators commute with grid translations") {
  const TorusGrid g(32);
  const ScalarField u = random_field(g, 7);
  ScalarField shifted(g);
  for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + 5) % g.size()] = u[i];
  const ScalarField lu = laplacian(u);
  const ScalarField gu = grad_sq(u);
  const ScalarField ls = laplacian(shifted);
  const ScalarField gs = grad_sq(shifted);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(ls[(i + 5) % g.size()] == lu[i]);
    CHECK(gs[(i + 5) % g.size()] == gu[i]);
  }
}

TEST_CASE("dirichlet energy of a smooth field converges at second order") {
  auto err = [](std::size_t n) {
    const TorusGrid g(n);
    const ScalarField u = ScalarField::sample(g, [](double x, double) {
      return std::sin(kTwoPi * x) + 0.5 * std::cos(2.0 * kTwoPi * x);
    });
    // exact: (2pi)^2 / 2 + 0.25 (4pi)^2 / 2
    const double exact = kTwoPi * kTwoPi / 2.0 + 0.25 * 4.0 * kTwoPi * kTwoPi / 2.0;
    return std::abs(dirichlet(u) - exact);
  };
  for (std::size_t n : {32u, 64u}) {
    const double ratio = err(n) / err(2 * n);
    CHECK(ratio >= 3.6);
    CHECK(ratio <= 4.4);
  }
}

TEST_CASE("snapshot round trip is exact and malformed input is rejected") {
  for (const TorusGrid& g : {TorusGrid(16, 0.5), TorusGrid(8, 6, 1.0, 3.0)}) {
    const ScalarField u = random_field(g, 3, -1e3, 1e3);
    std::stringstream buf;
    write_snapshot(buf, u);
    const ScalarField back = read_snapshot(buf);
    CHECK(back.grid() == g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == u[i]);
  }
  std::stringstream bad("torus dim=1 n=8 L=1\n1\n2\n");
  CHECK_THROWS_AS(read_snapshot(bad), Error);
  std::stringstream garbage("grid 8\n");
  CHECK_THROWS_AS(read_snapshot(garbage), Error);
}
