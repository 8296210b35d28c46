#pragma once

// Experiment configuration: a flat, sectioned key-value document.
//
//   # comment
//   preset = linear_ground_state      (optional, must come first; loads a preset)
//   seed = 7
//   [grid]
//   dim = 1
//   n = 128            (2-D: n = 32,32)
//   L = 1              (2-D: L = 1,1)
//   [flow]
//   variant = nonlinear
//   p = 3
//
// `section.key = value` at top level is equivalent to the sectioned form.
// Every key is listed in config_keys().

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlheat/flow.hpp"
#include "nlheat/integrators.hpp"

namespace nlheat {

struct GridConfig {
  int dim = 1;
  std::array<std::size_t, 2> n{128, 128};
  std::array<double, 2> L{1.0, 1.0};
  bool operator==(const GridConfig&) const = default;
};

enum class ForcingShape { Zero, Constant, Cosine };
enum class InitialShape { Constant, Sine, Random };

struct FlowConfig {
  FlowVariant variant = FlowVariant::LinearForced;
  double p = 3.0;
  ForcingShape forcing_shape = ForcingShape::Zero;
  double forcing_amplitude = 1.0;
  TemporalProfile forcing_profile = TemporalProfile::Constant;
  double forcing_rate = 0.0;
  bool operator==(const FlowConfig&) const = default;
};

/// g = 1 + amplitude * s(x) before normalization, s depending on the shape:
/// sine: sum over axes of sin(2 pi mode x_a / L_a); random: uniform in [-1, 1].
struct InitialConfig {
  InitialShape shape = InitialShape::Sine;
  double amplitude = 0.1;
  int mode = 1;
  bool operator==(const InitialConfig&) const = default;
};

struct DiagnosticsConfig {
  bool ledger = false;
  bool harnack = false;
  double harnack_a = 2.0;
  double harnack_t_floor = 0.1;
  bool log_identity = false;
  bool steady = false;
  double steady_tail_tol = 1e-6;
  bool steady_oracle = false;
  bool stability = false;
  double stability_amplitude = 0.12;  // partner initial amplitude
  bool compare_direct = false;
  bool decay_rate = false;
  bool operator==(const DiagnosticsConfig&) const = default;
};

/// Pass/fail thresholds; unset ones are not checked.
struct CheckConfig {
  std::optional<double> lambda_end_max;
  std::optional<double> uniform_dev_max;     // ||u(T) - 1||_inf
  std::optional<double> ledger_residual_max;
  std::optional<double> log_identity_max;
  std::optional<double> steady_residual_max;
  std::optional<double> oracle_match_max;
  std::optional<double> scheme_agreement_max;
  std::optional<int> picard_iterations_max;
  std::optional<double> decay_rate_rel_tol;
  bool stability_contraction = false;        // require fitted_C_l2 < 0
  bool operator==(const CheckConfig&) const = default;
};

struct OutputConfig {
  std::string dir = "nlheat-out";
  std::vector<double> snapshot_times;  // empty: initial and final state
  bool operator==(const OutputConfig&) const = default;
};

struct ExperimentConfig {
  std::string preset;  // informational
  std::uint64_t seed = 0;
  GridConfig grid;
  FlowConfig flow;
  InitialConfig initial;
  TimeControls controls;
  DiagnosticsConfig diagnostics;
  CheckConfig checks;
  OutputConfig output;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates; throws ErrorKind::Config naming the key and line.
ExperimentConfig parse_config(const std::string& text);

/// Applies `key=value` overrides, then re-validates.
void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides);

/// Full sectioned document; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// Checks the cross-field invariants. Throws ErrorKind::Config.
void validate_config(const ExperimentConfig& config);

std::vector<std::string> config_keys();

struct PresetInfo {
  std::string name;
  std::string description;
  std::string text;
};

/// Deterministically ordered preset catalog.
const std::vector<PresetInfo>& preset_catalog();
/// Throws ErrorKind::Config for unknown names.
ExperimentConfig load_preset(const std::string& name);
std::string list_presets();

// Builders shared by the experiment runner and the tests.
TorusGrid make_grid(const GridConfig& grid);
ScalarField make_initial(const TorusGrid& grid, const InitialConfig& initial, std::uint64_t seed);
FlowSpec make_flow(const ExperimentConfig& config, const InitialConfig& initial);

}  // namespace nlheat
