#include "nlheat/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <limits>
#include <sstream>

#include "nlheat/diagnostics.hpp"
#include "nlheat/error.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

namespace fs = std::filesystem;

namespace {

class CsvFile {
 public:
  explicit CsvFile(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<double>& values) { rows_.push_back(values); }

  void write(const fs::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
      out << '\n';
    }
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string time_tag(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", t);
  return buf;
}

class Runner {
 public:
  Runner(const ExperimentConfig& config, RunSummary& summary)
      : config_(config), summary_(summary), dir_(config.output.dir) {}

  void execute() {
    fs::create_directories(dir_);
    const FlowSpec spec = make_flow(config_, config_.initial);
    const bool stability = config_.diagnostics.stability;
    const bool compare = config_.diagnostics.compare_direct;

    // Partner runs are independent of the main one.
    std::future<Trajectory> partner;
    std::optional<FlowSpec> partner_spec;
    if (stability) {
      InitialConfig other = config_.initial;
      other.amplitude = config_.diagnostics.stability_amplitude;
      partner_spec = make_flow(config_, other);
      partner = std::async(std::launch::async,
                           [&] { return run(*partner_spec, config_.controls); });
    } else if (compare) {
      TimeControls direct = config_.controls;
      direct.scheme = Scheme::ImexProjected;
      partner = std::async(std::launch::async, [&spec, direct] { return run_direct(spec, direct); });
    }

    const Trajectory traj = run(spec, config_.controls);
    write_trajectory("trajectory.csv", traj, spec);
    write_snapshots(traj);
    basic_checks(traj, spec);

    if (config_.diagnostics.ledger) ledger(traj, spec);
    if (config_.diagnostics.harnack || config_.diagnostics.log_identity) harnack(traj, spec);
    if (config_.diagnostics.steady) steady(traj, spec);
    if (config_.diagnostics.decay_rate) decay(traj, spec);
    if (config_.controls.scheme == Scheme::Picard) picard(traj);

    if (stability) {
      const Trajectory other = partner.get();
      write_trajectory("trajectory_partner.csv", other, *partner_spec);
      stability_report(traj, other);
    } else if (compare) {
      compare_direct(traj, partner.get());
    }
  }

 private:
  void file(const std::string& name) { summary_.manifest.push_back(name); }

  void check(const std::string& name, double measured, const std::string& rel, double threshold) {
    bool ok = false;
    if (rel == "<=") ok = measured <= threshold;
    if (rel == "<") ok = measured < threshold;
    if (rel == ">") ok = measured > threshold;
    if (rel == ">=") ok = measured >= threshold;
    if (rel == "==") ok = measured == threshold;
    summary_.checks.push_back({name, measured, threshold, rel, ok});
  }

  void metric(const std::string& name, double value) { summary_.metrics.emplace_back(name, value); }

  void write_trajectory(const std::string& name, const Trajectory& traj, const FlowSpec& spec) {
    CsvFile csv({"t", "lambda", "mass", "dirichlet_energy", "extra_integral", "min_u"});
    const bool nonlinear = spec.variant() == FlowVariant::NonlinearPower;
    for (std::size_t s = 0; s < traj.size(); ++s) {
      const ScalarField& u = traj.states[s];
      const double t = traj.times[s];
      const double extra = nonlinear ? (u.min() > 0.0 ? integrate(field_power(u, spec.p() + 1.0))
                                                      : std::numeric_limits<double>::quiet_NaN())
                                     : inner(u, spec.forcing().at(t));
      csv.row({t, traj.lambda_trace[s].value, inner(u, u), dirichlet(u), extra, u.min()});
    }
    csv.write(dir_ / name);
    file(name);
  }

  void write_snapshots(const Trajectory& traj) {
    std::vector<std::size_t> picks;
    if (config_.output.snapshot_times.empty()) {
      picks = {0, traj.size() - 1};
    } else {
      for (double t : config_.output.snapshot_times) {
        std::size_t best = 0;
        for (std::size_t s = 0; s < traj.size(); ++s) {
          if (std::abs(traj.times[s] - t) < std::abs(traj.times[best] - t)) best = s;
        }
        picks.push_back(best);
      }
    }
    std::vector<std::string> written;
    for (std::size_t s : picks) {
      const std::string name = "snapshot_t" + time_tag(traj.times[s]) + ".txt";
      if (std::find(written.begin(), written.end(), name) != written.end()) continue;
      write_snapshot_file((dir_ / name).string(), traj.states[s]);
      written.push_back(name);
      file(name);
    }
  }

  void basic_checks(const Trajectory& traj, const FlowSpec& spec) {
    if (config_.controls.scheme == Scheme::ImexProjected) {
      double worst = 0.0;
      for (const auto& u : traj.states) worst = std::max(worst, std::abs(inner(u, u) - 1.0));
      check("mass_preservation", worst, "<=", 1e-10);
      metric("max_projection_drift", traj.max_projection_drift);
    }
    double min_u = std::numeric_limits<double>::infinity();
    for (const auto& u : traj.states) min_u = std::min(min_u, u.min());
    metric("min_u", min_u);
    if (spec.variant() == FlowVariant::NonlinearPower) check("positivity", min_u, ">", 0.0);

    const double lambda_end = traj.lambda_trace.back().value;
    metric("lambda_end", lambda_end);
    if (config_.checks.lambda_end_max) check("lambda_end", lambda_end, "<=", *config_.checks.lambda_end_max);
    if (config_.checks.uniform_dev_max) {
      const ScalarField& u = traj.final_state();
      const double level = 1.0 / std::sqrt(u.grid().volume());
      double dev = 0.0;
      for (double v : u.values()) dev = std::max(dev, std::abs(v - level));
      check("uniform_deviation", dev, "<=", *config_.checks.uniform_dev_max);
    }
  }

  void ledger(const Trajectory& traj, const FlowSpec& spec) {
    const EnergyLedger led = build_ledger(traj, spec);
    CsvFile csv({"t", "lambda", "mass", "dirichlet", "extra", "cum_ut_sq", "cum_ut_a", "u_ut",
                 "identity_residual"});
    for (const auto& r : led.rows) {
      csv.row({r.t, r.lambda, r.mass, r.dirichlet, r.extra, r.cum_ut_sq, r.cum_ut_a, r.u_ut,
               r.identity_residual});
    }
    csv.write(dir_ / "ledger.csv");
    file("ledger.csv");
    metric("ledger_max_identity_residual", led.max_identity_residual());
    if (config_.checks.ledger_residual_max) {
      check("ledger_identity", led.max_identity_residual(), "<=", *config_.checks.ledger_residual_max);
    }
    if (config_.controls.scheme == Scheme::ImexProjected) {
      check("ledger_orthogonality", led.max_abs_u_ut(), "<=", 1e-10);
    }
  }

  void harnack(const Trajectory& traj, const FlowSpec& spec) {
    const HarnackParams params{config_.diagnostics.harnack_a, 0.0, config_.diagnostics.harnack_t_floor};
    if (config_.diagnostics.harnack) {
      const HarnackReport rep = harnack_monitor(traj, spec, params);
      CsvFile csv({"t", "sup_F", "argmax", "min_u"});
      for (const auto& r : rep.rows) csv.row({r.t, r.sup_f, static_cast<double>(r.argmax), r.min_u});
      csv.write(dir_ / "harnack.csv");
      file("harnack.csv");
      metric("harnack_global_sup", rep.global_sup);
      check("harnack_finite", (rep.all_finite && std::isfinite(rep.global_sup)) ? 1.0 : 0.0, "==", 1.0);
    }
    if (config_.diagnostics.log_identity) {
      CsvFile csv({"t", "log_identity_residual"});
      double worst = 0.0;
      for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
        if (traj.times[s] < params.t_floor - 1e-12) continue;
        const double r = log_identity_residual(traj, s, spec);
        worst = std::max(worst, r);
        csv.row({traj.times[s], r});
      }
      csv.write(dir_ / "log_identity.csv");
      file("log_identity.csv");
      metric("log_identity_max", worst);
      if (config_.checks.log_identity_max) {
        check("log_identity", worst, "<", *config_.checks.log_identity_max);
      }
    }
  }

  void steady(const Trajectory& traj, const FlowSpec& spec) {
    SteadyReport rep{ScalarField(spec.grid()), 0.0, 0.0, 0.0, 0.0};
    try {
      rep = steady_extract(traj, spec, config_.diagnostics.steady_tail_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotConverged) throw;
      check("steady_tail", e.value(), "<=", config_.diagnostics.steady_tail_tol);
      return;
    }
    check("steady_tail", rep.tail_variation, "<=", config_.diagnostics.steady_tail_tol);
    check("steady_norm", rep.norm_check, "<=", 1e-8);
    metric("lambda_inf", rep.lambda_inf);
    metric("steady_residual", rep.residual_l2);
    if (config_.checks.steady_residual_max) {
      check("steady_residual", rep.residual_l2, "<=", *config_.checks.steady_residual_max);
    }
    write_snapshot_file((dir_ / "steady_u_inf.txt").string(), rep.u_inf);
    file("steady_u_inf.txt");

    CsvFile csv({"t_end", "lambda_inf", "residual_l2", "norm_check", "tail_variation", "oracle_lambda",
                 "oracle_u_l2_diff"});
    double oracle_lambda = std::numeric_limits<double>::quiet_NaN();
    double oracle_diff = std::numeric_limits<double>::quiet_NaN();
    if (config_.diagnostics.steady_oracle) {
      const SteadyOracle oracle = steady_oracle(spec.forcing().at(traj.times.back()));
      oracle_lambda = oracle.lambda;
      oracle_diff = l2_norm(rep.u_inf - oracle.u);
      write_snapshot_file((dir_ / "steady_oracle_u.txt").string(), oracle.u);
      file("steady_oracle_u.txt");
      metric("oracle_lambda", oracle.lambda);
      if (config_.checks.oracle_match_max) {
        check("oracle_match_u", oracle_diff, "<=", *config_.checks.oracle_match_max);
        check("oracle_match_lambda", std::abs(rep.lambda_inf - oracle.lambda), "<=",
              *config_.checks.oracle_match_max);
      }
    }
    csv.row({traj.times.back(), rep.lambda_inf, rep.residual_l2, rep.norm_check, rep.tail_variation,
             oracle_lambda, oracle_diff});
    csv.write(dir_ / "steady.csv");
    file("steady.csv");
  }

  void decay(const Trajectory& traj, const FlowSpec& spec) {
    const double rate = fit_decay_rate(traj);
    const double gap = discrete_spectral_gap(spec.grid());
    metric("decay_rate", rate);
    metric("discrete_spectral_gap", gap);
    if (config_.checks.decay_rate_rel_tol) {
      check("decay_rate", std::abs(rate - gap) / gap, "<=", *config_.checks.decay_rate_rel_tol);
    }
  }

  void picard(const Trajectory& traj) {
    CsvFile csv({"window", "t0", "iteration", "distance"});
    int max_iter = 0;
    bool monotone = true;
    for (std::size_t w = 0; w < traj.windows.size(); ++w) {
      const auto& win = traj.windows[w];
      max_iter = std::max(max_iter, win.iterations);
      for (std::size_t k = 0; k < win.distances.size(); ++k) {
        csv.row({static_cast<double>(w), win.t0, static_cast<double>(k + 1), win.distances[k]});
        if (k >= 2 && !(win.distances[k] < win.distances[k - 1])) monotone = false;
      }
    }
    csv.write(dir_ / "picard.csv");
    file("picard.csv");
    metric("picard_windows", static_cast<double>(traj.windows.size()));
    check("picard_monotone_contraction", monotone ? 1.0 : 0.0, "==", 1.0);
    if (config_.checks.picard_iterations_max) {
      check("picard_iterations", max_iter, "<=", *config_.checks.picard_iterations_max);
    }
  }

  void compare_direct(const Trajectory& picard_traj, const Trajectory& direct) {
    if (picard_traj.size() != direct.size()) {
      throw Error(ErrorKind::Structural, "Picard and direct runs recorded different stamps");
    }
    CsvFile csv({"t", "l2_difference"});
    double worst = 0.0;
    for (std::size_t s = 0; s < direct.size(); ++s) {
      const double d = l2_norm(renormalize(picard_traj.states[s]) - direct.states[s]);
      worst = std::max(worst, d);
      csv.row({direct.times[s], d});
    }
    csv.write(dir_ / "compare_direct.csv");
    file("compare_direct.csv");
    metric("scheme_agreement", worst);
    if (config_.checks.scheme_agreement_max) {
      check("scheme_agreement", worst, "<=", *config_.checks.scheme_agreement_max);
    }
  }

  void stability_report(const Trajectory& u, const Trajectory& v) {
    const StabilityReport rep = stability_compare(u, v);
    CsvFile csv({"t", "gap_l2", "gap_h1"});
    for (const auto& r : rep.rows) csv.row({r.t, r.gap_l2, r.gap_h1});
    csv.write(dir_ / "stability.csv");
    file("stability.csv");
    metric("fitted_C_l2", rep.fitted_c_l2);
    metric("fitted_C_h1", rep.fitted_c_h1);
    check("stability_bound_l2", rep.bound_holds_l2 ? 1.0 : 0.0, "==", 1.0);
    check("stability_bound_h1", rep.bound_holds_h1 ? 1.0 : 0.0, "==", 1.0);
    if (config_.checks.stability_contraction) check("stability_contraction", rep.fitted_c_l2, "<", 0.0);
  }

  const ExperimentConfig& config_;
  RunSummary& summary_;
  fs::path dir_;
};

}  // namespace

std::string format_summary(const RunSummary& summary) {
  std::ostringstream out;
  out << "status: " << (summary.exit_status == 0 ? "PASS" : summary.exit_status == 1 ? "FAIL" : "ERROR")
      << '\n';
  if (!summary.error.empty()) out << "error: " << summary.error << '\n';
  for (const auto& c : summary.checks) {
    out << "check " << c.name << ' ' << format_double(c.measured) << ' ' << c.relation << ' '
        << format_double(c.threshold) << ' ' << (c.passed ? "PASS" : "FAIL") << '\n';
  }
  for (const auto& [name, value] : summary.metrics) {
    out << "metric " << name << ' ' << format_double(value) << '\n';
  }
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", summary.wall_seconds);
  out << "wall_seconds: " << wall << '\n';
  out << "files:\n";
  for (const auto& f : summary.manifest) out << "  " << f << '\n';
  return out.str();
}

RunSummary run_experiment(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary summary;
  summary.output_dir = config.output.dir;
  try {
    validate_config(config);
    Runner(config, summary).execute();
  } catch (const Error& e) {
    summary.exit_status = 2;
    summary.error = std::string(to_string(e.kind())) + " error: " + e.what();
  } catch (const std::exception& e) {
    summary.exit_status = 2;
    summary.error = e.what();
  }
  if (summary.exit_status == 0) {
    for (const auto& c : summary.checks) {
      if (!c.passed) summary.exit_status = 1;
    }
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary.manifest.push_back("summary.txt");
  try {
    fs::create_directories(config.output.dir);
    std::ofstream out(fs::path(config.output.dir) / "summary.txt", std::ios::binary);
    if (!config.preset.empty()) out << "preset: " << config.preset << '\n';
    out << format_summary(summary);
  } catch (const std::exception& e) {
    summary.manifest.pop_back();
    summary.exit_status = 2;
    if (summary.error.empty()) summary.error = std::string("cannot write summary: ") + e.what();
  }
  return summary;
}

}  // namespace nlheat
