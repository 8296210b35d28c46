// Batch front end: run a config file or a named preset and write its artifacts.
//
//   nlheat run <config-path>
//   nlheat preset <name> [--out DIR] [--override key=value ...]
//   nlheat list-presets
//   nlheat version
//
// NLHEAT_OUTPUT_DIR, when set and non-empty, replaces the configured output
// directory. An explicit --out wins over both.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlheat/config.hpp"
#include "nlheat/error.hpp"
#include "nlheat/experiment.hpp"

namespace {

int execute(nlheat::ExperimentConfig config, const std::string& out_flag) {
  if (const char* env = std::getenv(nlheat::kOutputDirEnv); env && *env) config.output.dir = env;
  if (!out_flag.empty()) config.output.dir = out_flag;

  const nlheat::RunSummary summary = nlheat::run_experiment(config);
  std::cout << "output: " << summary.output_dir << '\n' << nlheat::format_summary(summary);
  if (!summary.error.empty()) std::cerr << "nlheat: " << summary.error << '\n';
  return summary.exit_status;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nlheat::Error(nlheat::ErrorKind::Io, "cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-preserving non-local heat flows on discrete tori"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required();

  std::string preset_name;
  std::string out_dir;
  std::vector<std::string> overrides;
  auto* preset = app.add_subcommand("preset", "Run a named preset");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_option("--out", out_dir, "Output directory");
  preset->add_option("--override", overrides, "key=value, repeatable")->take_all();

  auto* list = app.add_subcommand("list-presets", "Print the preset catalog");
  auto* version = app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      std::cout << nlheat::list_presets();
      return 0;
    }
    if (*version) {
      std::cout << "nlheat " << NLHEAT_VERSION << '\n';
      return 0;
    }
    if (*run) return execute(nlheat::parse_config(slurp(config_path)), "");
    nlheat::ExperimentConfig config = nlheat::load_preset(preset_name);
    nlheat::apply_overrides(config, overrides);
    return execute(config, out_dir);
  } catch (const nlheat::Error& e) {
    std::cerr << "nlheat: " << nlheat::to_string(e.kind()) << " error: " << e.what() << '\n';
    return 2;
  }
}
