#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "nlheat/integrators.hpp"

namespace nlheat {

// ---------------------------------------------------------------------------
// Energy ledger

struct LedgerRow {
  double t = 0.0;
  double lambda = 0.0;
  double mass = 0.0;        // int u^2
  double dirichlet = 0.0;   // int |grad u|^2
  double extra = 0.0;       // int u^(p+1) (nonlinear) or int u A (linear)
  double cum_ut_sq = 0.0;   // int_0^t int u_t^2
  double cum_ut_a = 0.0;    // int_0^t int u_t A (linear only)
  double u_ut = 0.0;        // int u u_t
  double identity_residual = 0.0;
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;
  double max_identity_residual() const;
  double max_abs_u_ut() const;
};

/// Largest stamp spacing build_ledger accepts.
inline constexpr double kMaxLedgerSpacing = 1e-2;

/// Energy identities along a trajectory, u_t taken from the flow's rhs and
/// accumulated with the trapezoid rule in t.
///   nonlinear: lambda + 2 int int u_t^2 = int(|grad g|^2 + 2/(p+1) g^(p+1))
///                                         + (p-1)/(p+1) int u^(p+1)
///   linear:    int|grad u|^2 - int|grad g|^2 + 2 int int u_t^2 = 2 int int u_t A
EnergyLedger build_ledger(const Trajectory& traj, const FlowSpec& spec);

// ---------------------------------------------------------------------------
// Harnack quantity

struct HarnackParams {
  double a = 2.0;
  double K = 0.0;  // Ricci lower bound; flat torus
  double t_floor = 0.1;
};

/// F = t (|grad w|^2 - a w_t + a (lambda + A/u))      (linear)
/// F = t (|grad w|^2 - a w_t + a (lambda - u^(p-1)))  (nonlinear)
/// with w = log u and w_t = rhs(u)/u.
ScalarField harnack_field(const Trajectory& traj, std::size_t stamp, const FlowSpec& spec,
                          const HarnackParams& params);

struct HarnackRow {
  double t = 0.0;
  double sup_f = 0.0;
  std::size_t argmax = 0;
  double min_u = 0.0;
};

struct HarnackReport {
  std::vector<HarnackRow> rows;
  double global_sup = 0.0;
  bool all_finite = true;
};

/// Evaluates harnack_field at every stamp with t >= t_floor.
HarnackReport harnack_monitor(const Trajectory& traj, const FlowSpec& spec,
                              const HarnackParams& params);

/// Max-norm of  dw/dt - lap w - |grad w|^2 - (lambda + A/u)  (or lambda - u^(p-1)),
/// dw/dt by centered differences of log u across the neighbouring stamps.
double log_identity_residual(const Trajectory& traj, std::size_t stamp, const FlowSpec& spec);

// ---------------------------------------------------------------------------
// Steady states

struct SteadyReport {
  ScalarField u_inf;
  double lambda_inf = 0.0;
  double residual_l2 = 0.0;
  double norm_check = 0.0;
  double tail_variation = 0.0;
};

/// Takes the last recorded state as the limit. Throws ErrorKind::NotConverged
/// if |lambda(t_end) - lambda(t_end - 1)| > tail_tol.
SteadyReport steady_extract(const Trajectory& traj, const FlowSpec& spec, double tail_tol);

/// ||lap u + lambda u + A||_2 or ||lap u + lambda u - u^p||_2 at time t.
double steady_residual(const ScalarField& u, double lambda, double t, const FlowSpec& spec);

struct SteadyOracle {
  ScalarField u;
  double lambda = 0.0;
  int bisection_steps = 0;
};

/// Solves lap u + lambda u + A = 0, ||u||_2 = 1, u >= 0 by bisection on
/// lambda < 0 (the map lambda -> ||(lap + lambda)^-1 (-A)|| is monotone there).
SteadyOracle steady_oracle(const ScalarField& forcing);

// ---------------------------------------------------------------------------
// Stability

struct StabilityRow {
  double t = 0.0;
  double gap_l2 = 0.0;  // ||u - v||_2^2
  double gap_h1 = 0.0;  // ||grad(u - v)||_2^2
};

struct StabilityReport {
  double initial_gap_l2 = 0.0;
  double initial_gap_h1 = 0.0;
  std::vector<StabilityRow> rows;
  double fitted_c_l2 = 0.0;
  double fitted_c_h1 = 0.0;
  bool bound_holds_l2 = false;
  bool bound_holds_h1 = false;
  bool bound_holds() const { return bound_holds_l2 && bound_holds_h1; }
};

inline constexpr double kGronwallMargin = 0.5;
inline constexpr double kGapFloor = 1e-14;

StabilityReport stability_compare(const Trajectory& traj_u, const Trajectory& traj_v);

// ---------------------------------------------------------------------------
// Misc

/// -slope of log ||u - mean(u)||_2 against t (least squares with intercept)
/// over stamps whose deviation exceeds `floor`.
double fit_decay_rate(const Trajectory& traj, double floor = 1e-11);

/// Least-squares slope through the origin of y against t.
double slope_through_origin(const std::vector<std::pair<double, double>>& points);

}  // namespace nlheat
