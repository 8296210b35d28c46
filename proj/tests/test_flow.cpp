#include <cmath>

#include <doctest.h>

#include "nlheat/error.hpp"
#include "nlheat/flow.hpp"
#include "nlheat/manifold.hpp"
#include "support.hpp"

using namespace nlheat;
using nlheat::testing::kTwoPi;
using nlheat::testing::random_field;
using nlheat::testing::sine_bump;

TEST_CASE("lambda of the normalized constant") {
  const TorusGrid g(128);
  const ScalarField one(g, 1.0);
  CHECK(lambda_nonlinear(one, 3.0) == 1.0);
  CHECK(lambda_nonlinear(one, 2.5) == 1.0);
  CHECK(lambda_linear(one, ScalarField(g, 0.0)) == 0.0);
  CHECK(lambda_linear(one, ScalarField(g, 2.0)) == -2.0);
}

TEST_CASE("lambda on a torus of volume 4") {
  // u = 1/2 has unit norm when |M| = 4; int u^4 = 4/16
  const TorusGrid g(32, 32, 2.0, 2.0);
  CHECK(lambda_nonlinear(ScalarField(g, 0.5), 3.0) == doctest::Approx(0.25));
}

TEST_CASE("lambda of a sine perturbation: power part exact, gradient part second order") {
  // u = c (1 + 0.3 sin 2 pi x), c = 1/sqrt(1.045). int u^4 is a trig polynomial
  // of degree 4, which the rectangle rule integrates exactly for n > 4.
  const double c = 1.0 / std::sqrt(1.0 + 0.045);
  const double power_exact = std::pow(c, 4) * (1.0 + 6.0 * 0.045 + 3.0 * std::pow(0.3, 4) / 8.0);
  const double grad_exact = c * c * 0.09 * kTwoPi * kTwoPi / 2.0;
  double prev_err = 0.0;
  for (std::size_t n : {128u, 256u, 4096u}) {
    const TorusGrid g(n);
    const ScalarField u = renormalize(sine_bump(g, 0.3));
    const double power = lambda_nonlinear(u, 3.0) - dirichlet(u);
    CHECK(power == doctest::Approx(power_exact).epsilon(1e-12));
    const double grad_err = std::abs(dirichlet(u) - grad_exact);
    const double h = g.spacing(0);
    CHECK(grad_err <= grad_exact * std::pow(kTwoPi * h, 2) / 12.0 * 1.01);
    if (prev_err > 0.0 && n == 256u) CHECK(prev_err / grad_err == doctest::Approx(4.0).epsilon(0.02));
    prev_err = grad_err;
  }
}

TEST_CASE("the normalized flow velocity is orthogonal to the state") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (const TorusGrid& g : {TorusGrid(64), TorusGrid(12, 16)}) {
      const ScalarField u = renormalize(random_field(g, seed, 0.2, 1.5));
      const auto nl = FlowSpec::nonlinear_power(u, 2.0 + 0.1 * static_cast<double>(seed));
      CHECK(std::abs(inner(u, rhs(u, 0.0, nl))) <= 1e-10 * (1.0 + dirichlet(u)));
      const auto lin = FlowSpec::linear_forced(u, ForcingSpec(random_field(g, seed + 50, 0.0, 3.0)));
      CHECK(std::abs(inner(u, rhs(u, 0.0, lin))) <= 1e-10 * (1.0 + dirichlet(u)));
    }
  }
}

TEST_CASE("lambda is invariant under grid translation") {
  const TorusGrid g(40);
  const ScalarField u = renormalize(random_field(g, 21, 0.3, 1.0));
  ScalarField shifted(g);
  for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + 13) % g.size()] = u[i];
  CHECK(lambda_nonlinear(shifted, 3.0) == doctest::Approx(lambda_nonlinear(u, 3.0)).epsilon(1e-14));
}

TEST_CASE("forcing profiles") {
  const TorusGrid g(16);
  const ForcingSpec steady(ScalarField(g, 2.0));
  CHECK(steady.alpha(5.0) == 1.0);
  const ForcingSpec decaying(ScalarField(g, 2.0), TemporalProfile::ExpDecay, 0.5);
  CHECK(decaying.alpha(2.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(decaying.at(2.0)[3] == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(ForcingSpec(ScalarField(g, 0.0)).is_zero());
  CHECK_THROWS_AS(ForcingSpec(ScalarField(g, -1.0)), Error);
}

TEST_CASE("flow construction enforces its domain") {
  const TorusGrid g(16);
  CHECK_THROWS_AS(FlowSpec::nonlinear_power(ScalarField(g, 1.0), 1.0), Error);
  CHECK_THROWS_AS(FlowSpec::nonlinear_power(ScalarField(g, 1.0), 0.5), Error);
  ScalarField dip(g, 1.0);
  dip[3] = 0.0;
  CHECK_THROWS_AS(FlowSpec::nonlinear_power(dip, 3.0), Error);
  CHECK_NOTHROW(FlowSpec::linear_forced(dip, ForcingSpec(ScalarField(g, 0.0))));
  // g is stored normalized
  const auto spec = FlowSpec::nonlinear_power(ScalarField(g, 3.0), 3.0);
  CHECK(l2_norm(spec.initial()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(spec.forcing(), Error);
}

TEST_CASE("renormalize refuses degenerate fields") {
  const TorusGrid g(8);
  try {
    (void)renormalize(ScalarField(g, 0.0));
    FAIL("zero field normalized");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  ScalarField bad(g, 1.0);
  bad[2] = std::nan("");
  CHECK_THROWS_AS(renormalize(bad), Error);
}

TEST_CASE("positive_power agrees with std::pow") {
  for (double x : {0.3, 1.0, 2.7}) {
    for (double e : {0.0, 1.0, 2.0, 3.0, 2.5, 7.0}) {
      CHECK(positive_power(x, e) == doctest::Approx(std::pow(x, e)).epsilon(1e-14));
    }
  }
  ScalarField u(TorusGrid(8), 1.0);
  u[0] = -0.1;
  CHECK_THROWS_AS(field_power(u, 2.0), Error);
}
