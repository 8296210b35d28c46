#include "nlheat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/linear_solvers.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

namespace {

ScalarField log_field(const ScalarField& u) {
  ScalarField w(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::log(u[i]);
  return w;
}

// lambda + A/u (linear) or lambda - u^(p-1) (nonlinear), nodewise.
ScalarField multiplier_terms(const ScalarField& u, double lambda, double t, const FlowSpec& spec) {
  ScalarField out(u.grid());
  if (spec.variant() == FlowVariant::LinearForced) {
    const ScalarField a = spec.forcing().at(t);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = lambda + a[i] / u[i];
  } else {
    const ScalarField q = field_power(u, spec.p() - 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = lambda - q[i];
  }
  return out;
}

void require_positive(const ScalarField& u, double t, const char* op) {
  if (!(u.min() > 0.0)) {
    throw Error(ErrorKind::Positivity,
                std::string(op) + ": state not positive at t=" + format_double(t), t);
  }
}

}  // namespace

double EnergyLedger::max_identity_residual() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.identity_residual);
  return m;
}

double EnergyLedger::max_abs_u_ut() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, std::abs(r.u_ut));
  return m;
}

EnergyLedger build_ledger(const Trajectory& traj, const FlowSpec& spec) {
  if (traj.size() == 0) throw Error(ErrorKind::Structural, "build_ledger: empty trajectory");
  for (std::size_t i = 1; i < traj.size(); ++i) {
    if (traj.times[i] - traj.times[i - 1] > kMaxLedgerSpacing * (1.0 + 1e-9)) {
      throw Error(ErrorKind::Config, "build_ledger: stamp spacing " +
                                         format_double(traj.times[i] - traj.times[i - 1]) +
                                         " exceeds " + format_double(kMaxLedgerSpacing));
    }
  }
  const bool nonlinear = spec.variant() == FlowVariant::NonlinearPower;
  const ScalarField& g = traj.states.front();
  const double p = spec.p();
  const double g_dirichlet = dirichlet(g);
  const double g_reference =
      nonlinear ? g_dirichlet + 2.0 / (p + 1.0) * integrate(field_power(g, p + 1.0)) : g_dirichlet;

  EnergyLedger ledger;
  ledger.rows.reserve(traj.size());
  double prev_ut_sq = 0.0;
  double prev_ut_a = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const ScalarField& u = traj.states[i];
    const ScalarField ut = rhs(u, t, spec);
    LedgerRow row;
    row.t = t;
    row.lambda = lambda_of(u, t, spec);
    row.mass = inner(u, u);
    row.dirichlet = dirichlet(u);
    row.u_ut = inner(u, ut);
    const double ut_sq = inner(ut, ut);
    double ut_a = 0.0;
    if (nonlinear) {
      row.extra = integrate(field_power(u, p + 1.0));
    } else {
      const ScalarField a = spec.forcing().at(t);
      row.extra = inner(u, a);
      ut_a = inner(ut, a);
    }
    if (i > 0) {
      const double h = t - traj.times[i - 1];
      const LedgerRow& prev = ledger.rows.back();
      row.cum_ut_sq = prev.cum_ut_sq + 0.5 * h * (prev_ut_sq + ut_sq);
      row.cum_ut_a = prev.cum_ut_a + 0.5 * h * (prev_ut_a + ut_a);
    }
    if (nonlinear) {
      row.identity_residual = std::abs(row.lambda + 2.0 * row.cum_ut_sq - g_reference -
                                       (p - 1.0) / (p + 1.0) * row.extra);
    } else {
      row.identity_residual =
          std::abs(row.dirichlet - g_reference + 2.0 * row.cum_ut_sq - 2.0 * row.cum_ut_a);
    }
    prev_ut_sq = ut_sq;
    prev_ut_a = ut_a;
    ledger.rows.push_back(row);
  }
  return ledger;
}

ScalarField harnack_field(const Trajectory& traj, std::size_t stamp, const FlowSpec& spec,
                          const HarnackParams& params) {
  if (stamp >= traj.size()) throw Error(ErrorKind::Domain, "harnack_field: stamp out of range");
  if (!(params.a > 1.0)) throw Error(ErrorKind::Domain, "harnack_field: need a > 1");
  const double t = traj.times[stamp];
  if (t < params.t_floor - 1e-12) {
    throw Error(ErrorKind::Domain, "harnack_field: t=" + format_double(t) + " is below t_floor");
  }
  const ScalarField& u = traj.states[stamp];
  require_positive(u, t, "harnack_field");

  const double lambda = lambda_of(u, t, spec);
  const ScalarField w = log_field(u);
  const ScalarField gw = grad_sq(w);
  const ScalarField ut = rhs(u, t, spec);
  const ScalarField m = multiplier_terms(u, lambda, t, spec);
  ScalarField f(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double wt = ut[i] / u[i];
    f[i] = t * (gw[i] - params.a * wt + params.a * m[i]);
  }
  return f;
}

HarnackReport harnack_monitor(const Trajectory& traj, const FlowSpec& spec,
                              const HarnackParams& params) {
  HarnackReport report;
  report.global_sup = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < traj.size(); ++s) {
    if (traj.times[s] < params.t_floor - 1e-12) continue;
    const ScalarField f = harnack_field(traj, s, spec, params);
    const auto values = f.values();
    const auto it = std::max_element(values.begin(), values.end());
    HarnackRow row{traj.times[s], *it, static_cast<std::size_t>(it - values.begin()),
                   traj.states[s].min()};
    report.all_finite = report.all_finite && f.all_finite();
    report.global_sup = std::max(report.global_sup, row.sup_f);
    report.rows.push_back(row);
  }
  return report;
}

double log_identity_residual(const Trajectory& traj, std::size_t stamp, const FlowSpec& spec) {
  if (stamp == 0 || stamp + 1 >= traj.size()) {
    throw Error(ErrorKind::Domain, "log_identity_residual: stamp has no neighbours on both sides");
  }
  const ScalarField& before = traj.states[stamp - 1];
  const ScalarField& u = traj.states[stamp];
  const ScalarField& after = traj.states[stamp + 1];
  const double t = traj.times[stamp];
  require_positive(before, traj.times[stamp - 1], "log_identity_residual");
  require_positive(u, t, "log_identity_residual");
  require_positive(after, traj.times[stamp + 1], "log_identity_residual");

  const double span = traj.times[stamp + 1] - traj.times[stamp - 1];
  const ScalarField w = log_field(u);
  const ScalarField lap_w = laplacian(w);
  const ScalarField gw = grad_sq(w);
  const ScalarField m = multiplier_terms(u, lambda_of(u, t, spec), t, spec);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double wt = (std::log(after[i]) - std::log(before[i])) / span;
    worst = std::max(worst, std::abs(wt - lap_w[i] - gw[i] - m[i]));
  }
  return worst;
}

double steady_residual(const ScalarField& u, double lambda, double t, const FlowSpec& spec) {
  ScalarField r = laplacian(u);
  if (spec.variant() == FlowVariant::LinearForced) {
    const ScalarField a = spec.forcing().at(t);
    for (std::size_t i = 0; i < u.size(); ++i) r[i] += lambda * u[i] + a[i];
  } else {
    const ScalarField up = field_power(u, spec.p());
    for (std::size_t i = 0; i < u.size(); ++i) r[i] += lambda * u[i] - up[i];
  }
  return l2_norm(r);
}

SteadyReport steady_extract(const Trajectory& traj, const FlowSpec& spec, double tail_tol) {
  if (traj.size() == 0) throw Error(ErrorKind::Structural, "steady_extract: empty trajectory");
  const double t_end = traj.times.back();
  const double t_ref = std::max(0.0, t_end - 1.0);
  std::size_t ref = 0;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    if (std::abs(traj.times[s] - t_ref) < std::abs(traj.times[ref] - t_ref)) ref = s;
  }
  const ScalarField& u = traj.final_state();
  const double lambda_end = lambda_of(u, t_end, spec);
  const double variation = std::abs(lambda_end - lambda_of(traj.states[ref], traj.times[ref], spec));
  if (!(variation <= tail_tol)) {
    throw Error(ErrorKind::NotConverged,
                "steady_extract: lambda still varies by " + format_double(variation) +
                    " over the last unit of time",
                std::numeric_limits<double>::quiet_NaN(), variation);
  }
  SteadyReport report{u, lambda_end, steady_residual(u, lambda_end, t_end, spec),
                      std::abs(l2_norm(u) - 1.0), variation};
  return report;
}

SteadyOracle steady_oracle(const ScalarField& forcing) {
  if (!forcing.all_finite() || forcing.min() < 0.0) {
    throw Error(ErrorKind::Domain, "steady_oracle: forcing must be finite and non-negative");
  }
  if (max_abs(forcing) == 0.0) {
    throw Error(ErrorKind::Domain, "steady_oracle: forcing must not vanish identically");
  }
  const TorusGrid& grid = forcing.grid();
  constexpr double kNormTol = 1e-10;
  constexpr int kMaxSteps = 400;

  auto solve = [&](double lambda) {
    // (-lambda) u - lap u = A  <=>  lap u + lambda u + A = 0
    ShiftedLaplacian op{grid, -lambda, 1.0, {}};
    return ScalarField(grid, solve_shifted(op, forcing.values(), 1e-10));
  };

  SteadyOracle out{ScalarField(grid), 0.0, 0};
  const double mean = integrate(forcing) / grid.volume();
  double guess = -mean * std::sqrt(grid.volume());
  ScalarField u = solve(guess);
  double norm = l2_norm(u);
  if (std::abs(norm - 1.0) <= kNormTol) {
    out.u = std::move(u);
    out.lambda = guess;
    return out;
  }

  // Bracket: ||u(lo)|| < 1 < ||u(hi)||, lo < hi < 0.
  double lo = guess;
  double hi = guess;
  int expansions = 0;
  if (norm > 1.0) {
    do {
      lo *= 2.0;
      if (++expansions > kMaxSteps) throw Error(ErrorKind::Oracle, "steady_oracle: no lower bracket");
    } while (l2_norm(solve(lo)) >= 1.0);
  } else {
    do {
      hi *= 0.5;
      if (++expansions > kMaxSteps || hi == 0.0) {
        throw Error(ErrorKind::Oracle, "steady_oracle: no upper bracket");
      }
    } while (l2_norm(solve(hi)) <= 1.0);
  }

  for (int step = 1; step <= kMaxSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    u = solve(mid);
    norm = l2_norm(u);
    if (std::abs(norm - 1.0) <= kNormTol) {
      out.u = std::move(u);
      out.lambda = mid;
      out.bisection_steps = step;
      return out;
    }
    (norm > 1.0 ? hi : lo) = mid;
  }
  throw Error(ErrorKind::Oracle, "steady_oracle: bisection did not reach the norm tolerance");
}

StabilityReport stability_compare(const Trajectory& traj_u, const Trajectory& traj_v) {
  if (traj_u.size() != traj_v.size() || traj_u.size() == 0) {
    throw Error(ErrorKind::Structural, "stability_compare: trajectories have different stamps");
  }
  StabilityReport report;
  for (std::size_t s = 0; s < traj_u.size(); ++s) {
    if (std::abs(traj_u.times[s] - traj_v.times[s]) > 1e-12) {
      throw Error(ErrorKind::Structural, "stability_compare: stamp " + std::to_string(s) +
                                             " differs between runs");
    }
    const ScalarField d = traj_u.states[s] - traj_v.states[s];
    report.rows.push_back({traj_u.times[s], inner(d, d), dirichlet(d)});
  }
  report.initial_gap_l2 = report.rows.front().gap_l2;
  report.initial_gap_h1 = report.rows.front().gap_h1;
  if (!(report.initial_gap_l2 > 0.0) || !(report.initial_gap_h1 > 0.0)) {
    throw Error(ErrorKind::Degenerate, "stability_compare: initial data coincide");
  }

  auto fit = [&](auto gap_of, double gap0) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : report.rows) {
      const double g = gap_of(r);
      if (r.t > 0.0 && g > kGapFloor) pts.emplace_back(r.t, std::log(g / gap0));
    }
    return pts.empty() ? 0.0 : slope_through_origin(pts);
  };
  auto holds = [&](auto gap_of, double gap0, double c) {
    return std::all_of(report.rows.begin(), report.rows.end(), [&](const StabilityRow& r) {
      return gap_of(r) <= gap0 * std::exp((c + kGronwallMargin) * r.t);
    });
  };
  const auto l2 = [](const StabilityRow& r) { return r.gap_l2; };
  const auto h1 = [](const StabilityRow& r) { return r.gap_h1; };
  report.fitted_c_l2 = fit(l2, report.initial_gap_l2);
  report.fitted_c_h1 = fit(h1, report.initial_gap_h1);
  report.bound_holds_l2 = holds(l2, report.initial_gap_l2, report.fitted_c_l2);
  report.bound_holds_h1 = holds(h1, report.initial_gap_h1, report.fitted_c_h1);
  return report;
}

double slope_through_origin(const std::vector<std::pair<double, double>>& points) {
  double sty = 0.0;
  double stt = 0.0;
  for (const auto& [t, y] : points) {
    sty += t * y;
    stt += t * t;
  }
  return stt > 0.0 ? sty / stt : 0.0;
}

double fit_decay_rate(const Trajectory& traj, double floor) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const ScalarField& u = traj.states[s];
    const double mean = integrate(u) / u.grid().volume();
    ScalarField dev = u;
    for (double& v : dev.values()) v -= mean;
    const double norm = l2_norm(dev);
    if (norm > floor) pts.emplace_back(traj.times[s], std::log(norm));
  }
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double st = 0.0, sy = 0.0;
  for (const auto& [t, y] : pts) {
    st += t;
    sy += y;
  }
  const double n = static_cast<double>(pts.size());
  const double tm = st / n;
  const double ym = sy / n;
  double num = 0.0, den = 0.0;
  for (const auto& [t, y] : pts) {
    num += (t - tm) * (y - ym);
    den += (t - tm) * (t - tm);
  }
  return -num / den;
}

}  // namespace nlheat
