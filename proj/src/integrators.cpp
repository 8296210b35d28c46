#include "nlheat/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/linear_solvers.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

namespace {

std::size_t exact_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double k = std::round(r);
  if (k < 1.0 || std::abs(r - k) > 1e-9 * std::max(1.0, k)) {
    throw Error(ErrorKind::Config, std::string(what) + " must be a positive integer multiple of dt");
  }
  return static_cast<std::size_t>(k);
}

std::string at_time(double t) { return "t=" + format_double(t); }

// (I - dt lap + dt diag(q)) x = b, solved for the correction x - b so that a
// constant b with q == 0 comes back bit-for-bit.
ScalarField implicit_diffusion(const ScalarField& b, double dt, const ScalarField* reaction) {
  const TorusGrid& grid = b.grid();
  ShiftedLaplacian op{grid, 1.0, dt, {}};
  const ScalarField lap_b = laplacian(b);
  std::vector<double> rhs(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = dt * lap_b[i];
  if (reaction != nullptr) {
    op.reaction.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      op.reaction[i] = dt * (*reaction)[i];
      rhs[i] -= op.reaction[i] * b[i];
    }
  }
  const std::vector<double> correction = solve_shifted(op, rhs, 1e-10);
  ScalarField out = b;
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += correction[i];
  return out;
}

}  // namespace

std::size_t TimeControls::step_count() const { return exact_ratio(t_end, dt, "t_end"); }

std::size_t TimeControls::steps_per_window() const {
  return exact_ratio(picard_window, dt, "picard_window");
}

std::size_t TimeControls::window_count() const {
  const std::size_t n = step_count();
  const std::size_t w = steps_per_window();
  return (n + w - 1) / w;
}

void TimeControls::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Config, "dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::Config, "t_end must be > 0");
  if (record_every < 1) throw Error(ErrorKind::Config, "record_every must be >= 1");
  (void)step_count();
  if (scheme == Scheme::Picard) {
    if (!(picard_window > dt) || picard_window > t_end * (1.0 + 1e-12)) {
      throw Error(ErrorKind::Config, "picard_window must satisfy dt < window <= t_end");
    }
    if (!(picard_tol > 0.0)) throw Error(ErrorKind::Config, "picard_tol must be > 0");
    if (picard_max_iter < 1) throw Error(ErrorKind::Config, "picard_max_iter must be >= 1");
    (void)steps_per_window();
  }
}

void Trajectory::push(double t, ScalarField state, double lambda, double drift) {
  times.push_back(t);
  lambda_trace.push_back({t, lambda});
  states.push_back(std::move(state));
  projection_drift.push_back(drift);
}

StepResult imex_step(const ScalarField& u, double t, double dt, const FlowSpec& spec) {
  require_same_grid(u, spec.initial(), "imex_step");
  const double norm = l2_norm(u);
  if (std::abs(norm - 1.0) > 1e-8) {
    throw Error(ErrorKind::Domain, "imex_step needs a unit-norm state, got norm " + format_double(norm));
  }
  const double lambda = lambda_of(u, t, spec);
  ScalarField b(u.grid());
  if (spec.variant() == FlowVariant::LinearForced) {
    const ScalarField a = spec.forcing().at(t);
    for (std::size_t i = 0; i < u.size(); ++i) b[i] = u[i] + dt * (lambda * u[i] + a[i]);
  } else {
    const ScalarField up = field_power(u, spec.p());
    for (std::size_t i = 0; i < u.size(); ++i) b[i] = u[i] + dt * (lambda * u[i] - up[i]);
  }
  ScalarField next = implicit_diffusion(b, dt, nullptr);
  if (spec.variant() == FlowVariant::NonlinearPower && !(next.min() > 0.0)) {
    throw Error(ErrorKind::Positivity,
                "positivity lost at " + at_time(t + dt) + " (min " + format_double(next.min()) + ")",
                t + dt);
  }
  if (!next.all_finite()) {
    throw Error(ErrorKind::Solver, "non-finite state at " + at_time(t + dt));
  }
  StepResult result{renormalize(next), l2_norm(next)};
  return result;
}

Trajectory run_direct(const FlowSpec& spec, const TimeControls& controls) {
  controls.validate();
  if (controls.scheme != Scheme::ImexProjected) {
    throw Error(ErrorKind::Config, "run_direct needs the ImexProjected scheme");
  }
  const std::size_t steps = controls.step_count();
  const auto every = static_cast<std::size_t>(controls.record_every);

  Trajectory traj;
  ScalarField u = spec.initial();
  traj.push(0.0, u, lambda_of(u, 0.0, spec), 0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    const double t_prev = static_cast<double>(n - 1) * controls.dt;
    const double t = static_cast<double>(n) * controls.dt;
    StepResult step = [&] {
      try {
        return imex_step(u, t_prev, controls.dt, spec);
      } catch (const Error& e) {
        throw e.annotated("step " + std::to_string(n));
      }
    }();
    const double drift = std::abs(step.pre_projection_norm - 1.0);
    traj.max_projection_drift = std::max(traj.max_projection_drift, drift);
    u = std::move(step.state);
    if (n % every == 0 || n == steps) traj.push(t, u, lambda_of(u, t, spec), drift);
  }
  return traj;
}

PicardWindowResult picard_solve_window(const ScalarField& g_window, double t0,
                                       const FlowSpec& spec, const TimeControls& controls) {
  controls.validate();
  if (controls.scheme != Scheme::Picard) {
    throw Error(ErrorKind::Config, "picard_solve_window needs the Picard scheme");
  }
  require_same_grid(g_window, spec.initial(), "picard_solve_window");
  if (std::abs(l2_norm(g_window) - 1.0) > 1e-8) {
    throw Error(ErrorKind::Domain, "Picard window must start from a unit-norm state");
  }
  const double dt = controls.dt;
  const std::size_t total = controls.step_count();
  const std::size_t step0 = static_cast<std::size_t>(std::llround(t0 / dt));
  if (step0 >= total) throw Error(ErrorKind::Domain, "Picard window starts at or after t_end");
  const std::size_t m = std::min(controls.steps_per_window(), total - step0);
  const bool nonlinear = spec.variant() == FlowVariant::NonlinearPower;
  auto time_of = [&](std::size_t n) { return static_cast<double>(step0 + n) * dt; };

  // u^(0): g extended constantly in time.
  std::vector<ScalarField> current(m + 1, g_window);
  PicardWindowResult result;

  for (int k = 0; k < controls.picard_max_iter; ++k) {
    std::vector<double> lambda(m + 1);
    for (std::size_t n = 0; n <= m; ++n) lambda[n] = lambda_of(current[n], time_of(n), spec);

    std::vector<ScalarField> next;
    next.reserve(m + 1);
    next.push_back(g_window);
    for (std::size_t n = 0; n < m; ++n) {
      const ScalarField& v = next.back();
      ScalarField b(v.grid());
      if (nonlinear) {
        for (std::size_t i = 0; i < v.size(); ++i) b[i] = (1.0 + dt * lambda[n]) * v[i];
        const ScalarField lag = field_power(current[n + 1], spec.p() - 1.0);
        next.push_back(implicit_diffusion(b, dt, &lag));
        if (!(next.back().min() > 0.0)) {
          throw Error(ErrorKind::Positivity,
                      "positivity lost in Picard iterate " + std::to_string(k + 1) + " at " +
                          at_time(time_of(n + 1)),
                      time_of(n + 1));
        }
      } else {
        const ScalarField a = spec.forcing().at(time_of(n));
        for (std::size_t i = 0; i < v.size(); ++i) b[i] = (1.0 + dt * lambda[n]) * v[i] + dt * a[i];
        next.push_back(implicit_diffusion(b, dt, nullptr));
      }
    }

    double distance = 0.0;
    for (std::size_t n = 0; n <= m; ++n) distance = std::max(distance, l2_norm(next[n] - current[n]));
    result.distances.push_back(distance);
    current = std::move(next);

    if (distance <= controls.picard_tol) {
      result.iterations = k + 1;
      const auto every = static_cast<std::size_t>(controls.record_every);
      for (std::size_t n = 0; n <= m; ++n) {
        const std::size_t global = step0 + n;
        if (n == 0 || global % every == 0 || n == m) {
          result.trajectory.push(time_of(n), current[n], lambda_of(current[n], time_of(n), spec));
        }
      }
      result.trajectory.windows.push_back({t0, result.iterations, result.distances});
      return result;
    }
  }

  const auto& d = result.distances;
  const double factor = d.size() >= 2 && d[d.size() - 2] > 0.0
                            ? d.back() / d[d.size() - 2]
                            : std::numeric_limits<double>::quiet_NaN();
  throw Error(ErrorKind::NonConvergence,
              "Picard iteration did not reach tolerance " + format_double(controls.picard_tol) +
                  " in " + std::to_string(controls.picard_max_iter) + " iterations (last distance " +
                  format_double(d.back()) + ", contraction " + format_double(factor) + ")",
              std::numeric_limits<double>::quiet_NaN(), factor);
}

Trajectory run_picard(const FlowSpec& spec, const TimeControls& controls) {
  controls.validate();
  if (controls.scheme != Scheme::Picard) {
    throw Error(ErrorKind::Config, "run_picard needs the Picard scheme");
  }
  const std::size_t windows = controls.window_count();
  const std::size_t per_window = controls.steps_per_window();
  Trajectory traj;
  ScalarField start = spec.initial();
  for (std::size_t w = 0; w < windows; ++w) {
    const double t0 = static_cast<double>(w * per_window) * controls.dt;
    PicardWindowResult window = [&] {
      try {
        return picard_solve_window(start, t0, spec, controls);
      } catch (const Error& e) {
        throw e.annotated("window " + std::to_string(w));
      }
    }();
    const Trajectory& part = window.trajectory;
    for (std::size_t s = (w == 0 ? 0 : 1); s < part.size(); ++s) {
      traj.push(part.times[s], part.states[s], part.lambda_trace[s].value, 0.0);
    }
    traj.windows.push_back(part.windows.front());
    start = renormalize(part.final_state());
  }
  return traj;
}

Trajectory run(const FlowSpec& spec, const TimeControls& controls) {
  return controls.scheme == Scheme::Picard ? run_picard(spec, controls) : run_direct(spec, controls);
}

}  // namespace nlheat
