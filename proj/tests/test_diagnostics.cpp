#include <cmath>

#include <doctest.h>

#include "nlheat/diagnostics.hpp"
#include "nlheat/error.hpp"
#include "nlheat/manifold.hpp"
#include "support.hpp"

using namespace nlheat;
using nlheat::testing::sine_bump;

namespace {

TimeControls imex(double dt, double t_end, int every = 1) {
  TimeControls c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

FlowSpec heat(const TorusGrid& g, double amp) {
  return FlowSpec::linear_forced(sine_bump(g, amp), ForcingSpec(ScalarField(g, 0.0)));
}

}  // namespace

TEST_CASE("ledger of the constant solution is identically zero") {
  const TorusGrid g(128);
  const auto spec = FlowSpec::nonlinear_power(ScalarField(g, 1.0), 3.0);
  const EnergyLedger led = build_ledger(run_direct(spec, imex(1e-3, 0.5)), spec);
  CHECK(led.rows.size() == 501);
  CHECK(led.max_identity_residual() <= 1e-12);
  CHECK(led.max_abs_u_ut() == 0.0);
  CHECK(led.rows.back().lambda == 1.0);
}

TEST_CASE("ledger residual is first order in dt") {
  const TorusGrid g(128);
  SUBCASE("linear") {
    const auto spec = heat(g, 0.1);
    const double a = build_ledger(run_direct(spec, imex(1e-3, 0.5)), spec).max_identity_residual();
    const double b = build_ledger(run_direct(spec, imex(5e-4, 0.5)), spec).max_identity_residual();
    CHECK(a / b >= 1.7);
    CHECK(a / b <= 2.3);
  }
  SUBCASE("nonlinear") {
    const auto spec = FlowSpec::nonlinear_power(sine_bump(g, 0.3), 3.0);
    const EnergyLedger coarse = build_ledger(run_direct(spec, imex(1e-3, 0.5)), spec);
    const EnergyLedger fine = build_ledger(run_direct(spec, imex(5e-4, 0.5)), spec);
    const double ratio = coarse.max_identity_residual() / fine.max_identity_residual();
    CHECK(ratio >= 1.7);
    CHECK(ratio <= 2.3);
    CHECK(coarse.max_abs_u_ut() <= 1e-10);
  }
}

TEST_CASE("ledger refuses sparse stamps") {
  const TorusGrid g(32);
  const auto spec = heat(g, 0.1);
  CHECK_THROWS_AS(build_ledger(run_direct(spec, imex(1e-3, 0.1, 20)), spec), Error);
}

TEST_CASE("Harnack quantity vanishes on constant solutions") {
  const TorusGrid g(64);
  const auto nl = FlowSpec::nonlinear_power(ScalarField(g, 1.0), 2.0);
  const HarnackReport r = harnack_monitor(run_direct(nl, imex(1e-3, 0.5)), nl, HarnackParams{});
  CHECK(r.all_finite);
  CHECK(r.global_sup == 0.0);
  CHECK(r.rows.size() == 401);  // stamps from t = 0.1

  // A = 1 with u = 1 is also stationary: lambda = -1, A/u = 1
  const auto lin = FlowSpec::linear_forced(ScalarField(g, 1.0), ForcingSpec(ScalarField(g, 1.0)));
  const HarnackReport q = harnack_monitor(run_direct(lin, imex(1e-3, 0.3)), lin, HarnackParams{});
  CHECK(q.global_sup == 0.0);
}

TEST_CASE("Harnack sup is bounded and grid-stable on a positive solution") {
  auto sup = [](std::size_t n) {
    const TorusGrid g(n);
    const auto spec = FlowSpec::nonlinear_power(sine_bump(g, 0.5), 2.0);
    const HarnackReport r = harnack_monitor(run_direct(spec, imex(1e-3, 1.0)), spec, HarnackParams{});
    CHECK(r.all_finite);
    return r.global_sup;
  };
  const double coarse = sup(64);
  const double fine = sup(128);
  CHECK(std::isfinite(coarse));
  CHECK(std::abs(coarse - fine) <= 0.1 * std::abs(fine));
}

TEST_CASE("log identity residual converges under joint refinement") {
  auto residual = [](std::size_t n, double dt) {
    const TorusGrid g(n);
    const auto spec = heat(g, 0.1);
    const Trajectory t = run_direct(spec, imex(dt, 0.2));
    const auto stamp = static_cast<std::size_t>(std::lround(0.1 / dt));
    return log_identity_residual(t, stamp, spec);
  };
  CHECK(residual(64, 2e-3) / residual(128, 1e-3) >= 1.8);
}

TEST_CASE("steady oracle on constant forcing") {
  for (double c : {1.0, 2.5}) {
    const SteadyOracle o = steady_oracle(ScalarField(TorusGrid(32), c));
    CHECK(o.lambda == doctest::Approx(-c).epsilon(1e-10));
    CHECK(max_abs(o.u - ScalarField(TorusGrid(32), 1.0)) <= 1e-9);
  }
  const TorusGrid g2(16, 16, 1.0, 2.0);
  const SteadyOracle o2 = steady_oracle(ScalarField(g2, 1.0));
  CHECK(o2.lambda == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("steady oracle for a cosine forcing satisfies its equation") {
  const TorusGrid g(256);
  const ScalarField a = ScalarField::sample(g, [](double x, double) {
    return 1.0 + std::cos(nlheat::testing::kTwoPi * x);
  });
  const SteadyOracle o = steady_oracle(a);
  const auto spec = FlowSpec::linear_forced(ScalarField(g, 1.0), ForcingSpec(a));
  CHECK(steady_residual(o.u, o.lambda, 0.0, spec) <= 1e-9);
  CHECK(l2_norm(o.u) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(o.u.min() > 0.0);
}

TEST_CASE("steady extraction matches the oracle for the forced flow") {
  const TorusGrid g(128);
  const ScalarField a = ScalarField::sample(g, [](double x, double) {
    return 1.0 + std::cos(nlheat::testing::kTwoPi * x);
  });
  const auto spec = FlowSpec::linear_forced(sine_bump(g, 0.1), ForcingSpec(a));
  const Trajectory t = run_direct(spec, imex(1e-3, 10.0, 10));
  const SteadyReport rep = steady_extract(t, spec, 1e-6);
  const SteadyOracle o = steady_oracle(a);
  CHECK(rep.residual_l2 <= 1e-3);
  CHECK(rep.norm_check <= 1e-8);
  CHECK(l2_norm(rep.u_inf - o.u) <= 1e-3);
  CHECK(std::abs(rep.lambda_inf - o.lambda) <= 1e-3);
  CHECK(rep.residual_l2 <= 10.0 * steady_residual(o.u, o.lambda, 0.0, spec) + 1e-3);
}

TEST_CASE("steady extraction reports an unsettled tail") {
  const TorusGrid g(64);
  const auto spec = heat(g, 0.3);
  const Trajectory t = run_direct(spec, imex(1e-3, 1.0, 10));
  try {
    (void)steady_extract(t, spec, 1e-12);
    FAIL("expected NotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotConverged);
  }
}

TEST_CASE("stability of the heat flow: gaps contract") {
  const TorusGrid g(128);
  const auto u = heat(g, 0.01);
  const auto v = heat(g, 0.012);
  const StabilityReport r = stability_compare(run_direct(u, imex(1e-3, 0.2)), run_direct(v, imex(1e-3, 0.2)));
  CHECK(r.initial_gap_l2 > 0.0);
  CHECK(r.fitted_c_l2 < 0.0);
  CHECK(r.fitted_c_h1 < 0.0);
  CHECK(r.bound_holds());
  for (const auto& row : r.rows) CHECK(row.gap_l2 >= 0.0);
}

TEST_CASE("stability of the nonlinear flow: a finite Gronwall constant") {
  const TorusGrid g(128);
  const auto u = FlowSpec::nonlinear_power(sine_bump(g, 0.01), 3.0);
  const auto v = FlowSpec::nonlinear_power(sine_bump(g, 0.012), 3.0);
  const StabilityReport r = stability_compare(run_direct(u, imex(1e-3, 0.2)), run_direct(v, imex(1e-3, 0.2)));
  CHECK(std::isfinite(r.fitted_c_l2));
  CHECK(r.bound_holds());
}

TEST_CASE("stability compare rejects identical or mismatched runs") {
  const TorusGrid g(32);
  const auto u = heat(g, 0.1);
  const Trajectory a = run_direct(u, imex(1e-3, 0.05));
  try {
    (void)stability_compare(a, a);
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Degenerate);
  }
  const Trajectory b = run_direct(heat(g, 0.2), imex(1e-3, 0.06));
  CHECK_THROWS_AS(stability_compare(a, b), Error);
}

TEST_CASE("decay rate of the heat flow is the discrete gap") {
  const TorusGrid g(128);
  const double rate = fit_decay_rate(run_direct(heat(g, 0.01), imex(1e-4, 0.3, 10)));
  // implicit Euler damps at log(1 + mu dt)/dt; the normalization factor drifts
  // at second order in the amplitude, so keep it small
  const double mu = discrete_spectral_gap(g);
  CHECK(rate == doctest::Approx(std::log1p(mu * 1e-4) / 1e-4).epsilon(1e-6));
}

TEST_CASE("slope through the origin") {
  CHECK(slope_through_origin({{1.0, 2.0}, {2.0, 4.0}}) == doctest::Approx(2.0));
  CHECK(slope_through_origin({}) == 0.0);
}
