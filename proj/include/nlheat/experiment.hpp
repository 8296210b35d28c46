#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlheat/config.hpp"

namespace nlheat {

/// Environment variable that overrides output.dir.
inline constexpr const char* kOutputDirEnv = "NLHEAT_OUTPUT_DIR";

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", "<", ">=", "=="
  bool passed = false;
};

struct RunSummary {
  int exit_status = 0;  // 0 pass, 1 failed check, 2 error
  std::string error;
  std::vector<CheckResult> checks;
  std::vector<std::pair<std::string, double>> metrics;  // reported, not judged
  double wall_seconds = 0.0;
  std::vector<std::string> manifest;  // every file written, relative to the output dir
  std::string output_dir;

  bool passed() const { return exit_status == 0; }
};

/// Runs the configured trajectory (plus partner / direct comparison runs),
/// evaluates the enabled diagnostics, and writes trajectory.csv, diagnostic
/// CSVs, field snapshots and summary.txt under config.output.dir.
RunSummary run_experiment(const ExperimentConfig& config);

/// Human-readable summary (also written to summary.txt).
std::string format_summary(const RunSummary& summary);

}  // namespace nlheat
