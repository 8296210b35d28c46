#include <cmath>

#include <doctest.h>

#include "nlheat/error.hpp"
#include "nlheat/integrators.hpp"
#include "nlheat/manifold.hpp"
#include "support.hpp"

using namespace nlheat;
using nlheat::testing::kTwoPi;
using nlheat::testing::random_field;
using nlheat::testing::sine_bump;

namespace {

FlowSpec heat(const TorusGrid& g, double amp) {
  return FlowSpec::linear_forced(sine_bump(g, amp), ForcingSpec(ScalarField(g, 0.0)));
}

TimeControls imex(double dt, double t_end, int every = 1) {
  TimeControls c;
  c.dt = dt;
  c.t_end = t_end;
  c.record_every = every;
  return c;
}

TimeControls picard(double dt, double t_end, double window, int every = 1) {
  TimeControls c = imex(dt, t_end, every);
  c.scheme = Scheme::Picard;
  c.picard_window = window;
  return c;
}

}  // namespace

TEST_CASE("constants are exact fixed points of a step") {
  const TorusGrid g(64);
  const auto nl = FlowSpec::nonlinear_power(ScalarField(g, 1.0), 3.0);
  const auto lin = FlowSpec::linear_forced(ScalarField(g, 1.0), ForcingSpec(ScalarField(g, 0.0)));
  for (double dt : {1e-4, 1e-2, 0.5}) {
    const StepResult a = imex_step(nl.initial(), 0.0, dt, nl);
    const StepResult b = imex_step(lin.initial(), 0.0, dt, lin);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(a.state[i] == 1.0);
      CHECK(b.state[i] == 1.0);
    }
  }
}

TEST_CASE("one step agrees with a tiny-step explicit oracle") {
  const TorusGrid g(64);
  const auto spec = heat(g, 0.1);
  const double dt = 1e-4;
  const StepResult step = imex_step(spec.initial(), 0.0, dt, spec);

  ScalarField u = spec.initial();
  const int sub = 1000;
  for (int k = 0; k < sub; ++k) {
    const ScalarField f = rhs(u, k * dt / sub, spec);
    u = u + (dt / sub) * f;
  }
  u = renormalize(u);
  CHECK(max_abs(step.state - u) <= 1e-6);
}

TEST_CASE("a step off the unit sphere is rejected") {
  const TorusGrid g(16);
  const auto spec = heat(g, 0.1);
  CHECK_THROWS_AS(imex_step(2.0 * spec.initial(), 0.0, 1e-3, spec), Error);
}

TEST_CASE("run_direct on the constant nonlinear state") {
  const TorusGrid g(128);
  const auto spec = FlowSpec::nonlinear_power(ScalarField(g, 1.0), 3.0);
  const Trajectory t = run_direct(spec, imex(1e-3, 1.0));
  CHECK(t.size() == 1001);
  for (std::size_t s = 0; s < t.size(); ++s) {
    CHECK(t.lambda_trace[s].value == 1.0);
    CHECK(max_abs(t.states[s] - ScalarField(g, 1.0)) == 0.0);
  }
}

TEST_CASE("run_direct reproduces the discrete heat-flow solution") {
  // Without forcing each step scales the sin mode by 1/(1 + mu dt) relative to the mean.
  const TorusGrid g(128);
  const auto spec = heat(g, 0.1);
  const double dt = 1e-3;
  const Trajectory traj = run_direct(spec, imex(dt, 2.0, 100));
  const double mu = discrete_spectral_gap(g);
  double worst = 0.0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const double n = std::round(traj.times[s] / dt);
    const ScalarField oracle = renormalize(sine_bump(g, 0.1 * std::pow(1.0 + mu * dt, -n)));
    worst = std::max(worst, max_abs(traj.states[s] - oracle));
    CHECK(std::abs(l2_norm(traj.states[s]) - 1.0) <= 1e-10);
  }
  CHECK(worst <= 1e-12);
  CHECK(max_abs(traj.final_state() - ScalarField(g, 1.0)) <= 1e-4);
  CHECK(traj.lambda_trace.back().value <= 1e-6);
  // and the continuum: exp(-4 pi^2 t) against the discrete amplification
  const ScalarField continuum = renormalize(sine_bump(g, 0.1 * std::exp(-kTwoPi * kTwoPi * 0.1)));
  CHECK(max_abs(traj.states[1] - continuum) <= 5e-3);
}

TEST_CASE("records land on the requested stamps and the final step") {
  const TorusGrid g(32);
  const Trajectory t = run_direct(heat(g, 0.1), imex(0.01, 0.25, 10));
  REQUIRE(t.size() == 4);
  CHECK(t.times[1] == doctest::Approx(0.1));
  CHECK(t.times[3] == doctest::Approx(0.25));
  CHECK_THROWS_AS(run_direct(heat(g, 0.1), imex(0.01, 0.255)), Error);
}

TEST_CASE("nonnegative data stays nonnegative under the linear flow") {
  const TorusGrid g(64);
  const ScalarField bumpy = ScalarField::sample(g, [](double x, double) { return x < 0.3 ? 1.0 : 0.0; });
  const auto spec = FlowSpec::linear_forced(bumpy, ForcingSpec(ScalarField(g, 0.5)));
  const Trajectory t = run_direct(spec, imex(1e-3, 0.5, 50));
  for (const auto& u : t.states) CHECK(u.min() >= -1e-14);
}

TEST_CASE("pre-projection drift is second order in dt") {
  const TorusGrid g(128);
  const auto spec = FlowSpec::nonlinear_power(sine_bump(g, 0.3), 3.0);
  const double coarse = run_direct(spec, imex(1e-3, 0.5, 500)).max_projection_drift;
  const double fine = run_direct(spec, imex(5e-4, 0.5, 1000)).max_projection_drift;
  CHECK(coarse / fine >= 3.5);
  CHECK(coarse / fine <= 4.5);
}

TEST_CASE("2-D runs keep the norm and relax to the constant") {
  const TorusGrid g(24, 24);
  const auto spec = FlowSpec::nonlinear_power(sine_bump(g, 0.2), 2.0);
  const Trajectory t = run_direct(spec, imex(1e-3, 0.3, 100));
  for (const auto& u : t.states) CHECK(std::abs(l2_norm(u) - 1.0) <= 1e-10);
  CHECK(max_abs(t.final_state() - ScalarField(g, 1.0)) <= 1e-3);
}

TEST_CASE("Picard on the constant state converges immediately") {
  const TorusGrid g(32);
  const auto spec = FlowSpec::nonlinear_power(ScalarField(g, 1.0), 3.0);
  const PicardWindowResult r = picard_solve_window(spec.initial(), 0.0, spec, picard(1e-3, 0.1, 0.1));
  CHECK(r.iterations == 1);
  for (const auto& u : r.trajectory.states) CHECK(max_abs(u - ScalarField(g, 1.0)) <= 1e-12);

  // the implicit reaction term is solved in floating point, so chaining is exact
  // only up to roundoff
  const Trajectory one = run_picard(spec, picard(1e-3, 0.2, 0.2));
  const Trajectory two = run_picard(spec, picard(1e-3, 0.2, 0.1));
  CHECK(two.windows.size() == 2);
  REQUIRE(two.size() == one.size());
  CHECK(two.size() == 201);
  for (std::size_t s = 0; s < two.size(); ++s) {
    CHECK(max_abs(two.states[s] - ScalarField(g, 1.0)) <= 1e-12);
    CHECK(max_abs(two.states[s] - one.states[s]) <= 1e-12);
  }
}

TEST_CASE("Picard agrees with the direct scheme on the linear flow") {
  const TorusGrid g(64);
  const auto spec = heat(g, 0.1);
  const Trajectory p = run_picard(spec, picard(1e-4, 0.2, 0.05, 100));
  const Trajectory d = run_direct(spec, imex(1e-4, 0.2, 100));
  REQUIRE(p.size() == d.size());
  double worst = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    CHECK(p.times[s] == doctest::Approx(d.times[s]));
    worst = std::max(worst, l2_norm(renormalize(p.states[s]) - d.states[s]));
  }
  CHECK(worst <= 1e-6);
  CHECK(p.windows.size() == 4);
  for (const auto& w : p.windows) {
    CHECK(w.iterations <= 10);
    for (std::size_t k = 2; k < w.distances.size(); ++k) CHECK(w.distances[k] < w.distances[k - 1]);
  }
}

TEST_CASE("Picard on the nonlinear flow is first-order close to the direct scheme") {
  const TorusGrid g(64);
  const auto spec = FlowSpec::nonlinear_power(sine_bump(g, 0.3), 3.0);
  auto gap = [&](double dt) {
    const int every = static_cast<int>(std::lround(0.01 / dt));
    const Trajectory p = run_picard(spec, picard(dt, 0.1, 0.05, every));
    const Trajectory d = run_direct(spec, imex(dt, 0.1, every));
    double worst = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
      worst = std::max(worst, l2_norm(renormalize(p.states[s]) - d.states[s]));
    }
    return worst;
  };
  const double coarse = gap(2e-4);
  const double fine = gap(1e-4);
  CHECK(coarse / fine == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("Picard non-convergence is reported with its contraction factor") {
  const TorusGrid g(32);
  TimeControls c = picard(1e-3, 0.1, 0.05);
  c.picard_max_iter = 1;
  c.picard_tol = 1e-15;
  try {
    (void)run_picard(heat(g, 0.1), c);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
  c.picard_max_iter = 3;
  try {
    (void)picard_solve_window(heat(g, 0.1).initial(), 0.0, heat(g, 0.1), c);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
    CHECK(e.value() > 0.0);
    CHECK(e.value() < 1.0);
  }
}

TEST_CASE("window count is the ceiling of t_end over the window") {
  CHECK(picard(1e-3, 0.2, 0.05).window_count() == 4);
  CHECK(picard(1e-3, 0.21, 0.05).window_count() == 5);
  CHECK(picard(1e-3, 0.05, 0.05).window_count() == 1);
  const TorusGrid g(16);
  const Trajectory t = run_picard(heat(g, 0.1), picard(1e-3, 0.21, 0.05, 10));
  CHECK(t.windows.size() == 5);
  CHECK(t.times.back() == doctest::Approx(0.21));
}
