#pragma once

#include <cstddef>
#include <vector>

#include "nlheat/flow.hpp"

namespace nlheat {

enum class Scheme { ImexProjected, Picard };

struct TimeControls {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::ImexProjected;
  double picard_window = 0.05;
  double picard_tol = 1e-8;
  int picard_max_iter = 50;
  int record_every = 1;

  /// Total number of dt steps to t_end; throws ErrorKind::Config unless
  /// t_end is an integer multiple of dt (to 1e-9 relative).
  std::size_t step_count() const;
  std::size_t steps_per_window() const;
  std::size_t window_count() const;
  void validate() const;

  bool operator==(const TimeControls&) const = default;
};

struct LambdaValue {
  double t = 0.0;
  double value = 0.0;
};

/// Per-window bookkeeping of the successive-linearization scheme.
struct PicardWindowStats {
  double t0 = 0.0;
  int iterations = 0;
  std::vector<double> distances;  // sup_t ||u^(k+1) - u^(k)||_2, one per iteration
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ScalarField> states;
  std::vector<LambdaValue> lambda_trace;
  /// |l2_norm(u*) - 1| of the step that produced each stamp (0 at t = 0).
  /// ImexProjected only.
  std::vector<double> projection_drift;
  /// Max of the above over every step, recorded or not.
  double max_projection_drift = 0.0;
  std::vector<PicardWindowStats> windows;

  std::size_t size() const noexcept { return times.size(); }
  const ScalarField& final_state() const { return states.back(); }
  void push(double t, ScalarField state, double lambda, double drift = 0.0);
};

struct StepResult {
  ScalarField state;
  double pre_projection_norm = 1.0;
};

/// One step of the projected semi-implicit scheme:
///   (I - dt lap) u* = u + dt (lambda(u, t) u + S(u, t)),   result = u* / ||u*||
/// where S is A(., t) or -u^p.
StepResult imex_step(const ScalarField& u, double t, double dt, const FlowSpec& spec);

Trajectory run_direct(const FlowSpec& spec, const TimeControls& controls);

struct PicardWindowResult {
  Trajectory trajectory;  // states are NOT renormalized
  int iterations = 0;
  std::vector<double> distances;
};

/// Successive linearization on [t0, t0 + window]. Iterate k+1 solves the
/// linear problem with the multiplier lambda^(k)(t) computed from iterate k.
PicardWindowResult picard_solve_window(const ScalarField& g_window, double t0,
                                       const FlowSpec& spec, const TimeControls& controls);

/// Chains windows to t_end, restarting each from the renormalized terminal
/// state of the previous one.
Trajectory run_picard(const FlowSpec& spec, const TimeControls& controls);

/// Dispatches on controls.scheme.
Trajectory run(const FlowSpec& spec, const TimeControls& controls);

}  // namespace nlheat
