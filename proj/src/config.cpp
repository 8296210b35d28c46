#include "nlheat/config.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "nlheat/error.hpp"
#include "nlheat/manifold.hpp"

namespace nlheat {

namespace {

using KeyLines = std::map<std::string, int>;

[[noreturn]] void fail(const std::string& key, int line, const std::string& why) {
  std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
  throw Error(ErrorKind::Config, where + "key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Value parsers throw std::invalid_argument; the caller adds key and line.

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + s + "'");
  }
  return v;
}

long long to_integer(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + s + "'");
}

template <class E>
E to_enum(const std::string& s, const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [name, value] : names) {
    if (s == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw std::invalid_argument("expected one of " + allowed + ", got '" + s + "'");
}

template <class E>
std::string enum_name(E v, const std::vector<std::pair<const char*, E>>& names) {
  for (const auto& [name, value] : names) {
    if (value == v) return name;
  }
  return "?";
}

const std::vector<std::pair<const char*, FlowVariant>> kVariants = {
    {"linear", FlowVariant::LinearForced}, {"nonlinear", FlowVariant::NonlinearPower}};
const std::vector<std::pair<const char*, ForcingShape>> kForcingShapes = {
    {"zero", ForcingShape::Zero}, {"constant", ForcingShape::Constant}, {"cosine", ForcingShape::Cosine}};
const std::vector<std::pair<const char*, TemporalProfile>> kProfiles = {
    {"constant", TemporalProfile::Constant}, {"exp_decay", TemporalProfile::ExpDecay}};
const std::vector<std::pair<const char*, InitialShape>> kInitialShapes = {
    {"constant", InitialShape::Constant}, {"sine", InitialShape::Sine}, {"random", InitialShape::Random}};
const std::vector<std::pair<const char*, Scheme>> kSchemes = {
    {"imex", Scheme::ImexProjected}, {"picard", Scheme::Picard}};

std::string fmt(double v) { return format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }

std::optional<double> to_opt_double(const std::string& s) {
  if (s == "none") return std::nullopt;
  return to_double(s);
}

struct KeySpec {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

const std::vector<KeySpec>& key_table() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<KeySpec> table = {
      {"seed", [](C& c, S v) { c.seed = static_cast<std::uint64_t>(to_integer(v)); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"grid.dim", [](C& c, S v) { c.grid.dim = static_cast<int>(to_integer(v)); },
       [](const C& c) { return std::to_string(c.grid.dim); }},
      {"grid.n",
       [](C& c, S v) {
         const auto parts = split_list(v);
         if (parts.empty() || parts.size() > 2) throw std::invalid_argument("expected n or n0,n1");
         for (std::size_t a = 0; a < parts.size(); ++a) {
           const long long n = to_integer(parts[a]);
           if (n < 0) throw std::invalid_argument("node counts must be positive");
           c.grid.n[a] = static_cast<std::size_t>(n);
         }
         if (parts.size() == 1) c.grid.n[1] = c.grid.n[0];
       },
       [](const C& c) {
         return c.grid.dim == 2 ? std::to_string(c.grid.n[0]) + "," + std::to_string(c.grid.n[1])
                                : std::to_string(c.grid.n[0]);
       }},
      {"grid.L",
       [](C& c, S v) {
         const auto parts = split_list(v);
         if (parts.empty() || parts.size() > 2) throw std::invalid_argument("expected L or L0,L1");
         for (std::size_t a = 0; a < parts.size(); ++a) c.grid.L[a] = to_double(parts[a]);
         if (parts.size() == 1) c.grid.L[1] = c.grid.L[0];
       },
       [](const C& c) {
         return c.grid.dim == 2 ? fmt(c.grid.L[0]) + "," + fmt(c.grid.L[1]) : fmt(c.grid.L[0]);
       }},
      {"flow.variant", [](C& c, S v) { c.flow.variant = to_enum(v, kVariants); },
       [](const C& c) { return enum_name(c.flow.variant, kVariants); }},
      {"flow.p", [](C& c, S v) { c.flow.p = to_double(v); }, [](const C& c) { return fmt(c.flow.p); }},
      {"flow.forcing", [](C& c, S v) { c.flow.forcing_shape = to_enum(v, kForcingShapes); },
       [](const C& c) { return enum_name(c.flow.forcing_shape, kForcingShapes); }},
      {"flow.forcing_amplitude", [](C& c, S v) { c.flow.forcing_amplitude = to_double(v); },
       [](const C& c) { return fmt(c.flow.forcing_amplitude); }},
      {"flow.forcing_profile", [](C& c, S v) { c.flow.forcing_profile = to_enum(v, kProfiles); },
       [](const C& c) { return enum_name(c.flow.forcing_profile, kProfiles); }},
      {"flow.forcing_rate", [](C& c, S v) { c.flow.forcing_rate = to_double(v); },
       [](const C& c) { return fmt(c.flow.forcing_rate); }},
      {"initial.shape", [](C& c, S v) { c.initial.shape = to_enum(v, kInitialShapes); },
       [](const C& c) { return enum_name(c.initial.shape, kInitialShapes); }},
      {"initial.amplitude", [](C& c, S v) { c.initial.amplitude = to_double(v); },
       [](const C& c) { return fmt(c.initial.amplitude); }},
      {"initial.mode", [](C& c, S v) { c.initial.mode = static_cast<int>(to_integer(v)); },
       [](const C& c) { return std::to_string(c.initial.mode); }},
      {"controls.scheme", [](C& c, S v) { c.controls.scheme = to_enum(v, kSchemes); },
       [](const C& c) { return enum_name(c.controls.scheme, kSchemes); }},
      {"controls.dt", [](C& c, S v) { c.controls.dt = to_double(v); },
       [](const C& c) { return fmt(c.controls.dt); }},
      {"controls.t_end", [](C& c, S v) { c.controls.t_end = to_double(v); },
       [](const C& c) { return fmt(c.controls.t_end); }},
      {"controls.record_every", [](C& c, S v) { c.controls.record_every = static_cast<int>(to_integer(v)); },
       [](const C& c) { return std::to_string(c.controls.record_every); }},
      {"controls.picard_window", [](C& c, S v) { c.controls.picard_window = to_double(v); },
       [](const C& c) { return fmt(c.controls.picard_window); }},
      {"controls.picard_tol", [](C& c, S v) { c.controls.picard_tol = to_double(v); },
       [](const C& c) { return fmt(c.controls.picard_tol); }},
      {"controls.picard_max_iter",
       [](C& c, S v) { c.controls.picard_max_iter = static_cast<int>(to_integer(v)); },
       [](const C& c) { return std::to_string(c.controls.picard_max_iter); }},
      {"diagnostics.ledger", [](C& c, S v) { c.diagnostics.ledger = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.ledger); }},
      {"diagnostics.harnack", [](C& c, S v) { c.diagnostics.harnack = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.harnack); }},
      {"diagnostics.harnack_a", [](C& c, S v) { c.diagnostics.harnack_a = to_double(v); },
       [](const C& c) { return fmt(c.diagnostics.harnack_a); }},
      {"diagnostics.harnack_t_floor", [](C& c, S v) { c.diagnostics.harnack_t_floor = to_double(v); },
       [](const C& c) { return fmt(c.diagnostics.harnack_t_floor); }},
      {"diagnostics.log_identity", [](C& c, S v) { c.diagnostics.log_identity = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.log_identity); }},
      {"diagnostics.steady", [](C& c, S v) { c.diagnostics.steady = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.steady); }},
      {"diagnostics.steady_tail_tol", [](C& c, S v) { c.diagnostics.steady_tail_tol = to_double(v); },
       [](const C& c) { return fmt(c.diagnostics.steady_tail_tol); }},
      {"diagnostics.steady_oracle", [](C& c, S v) { c.diagnostics.steady_oracle = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.steady_oracle); }},
      {"diagnostics.stability", [](C& c, S v) { c.diagnostics.stability = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.stability); }},
      {"diagnostics.stability_amplitude",
       [](C& c, S v) { c.diagnostics.stability_amplitude = to_double(v); },
       [](const C& c) { return fmt(c.diagnostics.stability_amplitude); }},
      {"diagnostics.compare_direct", [](C& c, S v) { c.diagnostics.compare_direct = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.compare_direct); }},
      {"diagnostics.decay_rate", [](C& c, S v) { c.diagnostics.decay_rate = to_bool(v); },
       [](const C& c) { return fmt(c.diagnostics.decay_rate); }},
      {"checks.lambda_end_max", [](C& c, S v) { c.checks.lambda_end_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.lambda_end_max); }},
      {"checks.uniform_dev_max", [](C& c, S v) { c.checks.uniform_dev_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.uniform_dev_max); }},
      {"checks.ledger_residual_max", [](C& c, S v) { c.checks.ledger_residual_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.ledger_residual_max); }},
      {"checks.log_identity_max", [](C& c, S v) { c.checks.log_identity_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.log_identity_max); }},
      {"checks.steady_residual_max", [](C& c, S v) { c.checks.steady_residual_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.steady_residual_max); }},
      {"checks.oracle_match_max", [](C& c, S v) { c.checks.oracle_match_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.oracle_match_max); }},
      {"checks.scheme_agreement_max",
       [](C& c, S v) { c.checks.scheme_agreement_max = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.scheme_agreement_max); }},
      {"checks.picard_iterations_max",
       [](C& c, S v) {
         if (v == "none") {
           c.checks.picard_iterations_max.reset();
         } else {
           c.checks.picard_iterations_max = static_cast<int>(to_integer(v));
         }
       },
       [](const C& c) {
         return c.checks.picard_iterations_max ? std::to_string(*c.checks.picard_iterations_max)
                                               : std::string("none");
       }},
      {"checks.decay_rate_rel_tol", [](C& c, S v) { c.checks.decay_rate_rel_tol = to_opt_double(v); },
       [](const C& c) { return fmt_opt(c.checks.decay_rate_rel_tol); }},
      {"checks.stability_contraction", [](C& c, S v) { c.checks.stability_contraction = to_bool(v); },
       [](const C& c) { return fmt(c.checks.stability_contraction); }},
      {"output.dir",
       [](C& c, S v) {
         if (v.empty()) throw std::invalid_argument("output directory must not be empty");
         c.output.dir = v;
       },
       [](const C& c) { return c.output.dir; }},
      {"output.snapshot_times",
       [](C& c, S v) {
         c.output.snapshot_times.clear();
         if (v == "none" || v.empty()) return;
         for (const auto& part : split_list(v)) c.output.snapshot_times.push_back(to_double(part));
       },
       [](const C& c) {
         if (c.output.snapshot_times.empty()) return std::string("none");
         std::string s;
         for (double t : c.output.snapshot_times) s += (s.empty() ? "" : ",") + fmt(t);
         return s;
       }},
  };
  return table;
}

const KeySpec* find_key(const std::string& key) {
  for (const auto& spec : key_table()) {
    if (spec.key == key) return &spec;
  }
  return nullptr;
}

void set_key(ExperimentConfig& config, const std::string& key, const std::string& value, int line) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) fail(key, line, "unknown key");
  try {
    spec->set(config, value);
  } catch (const std::invalid_argument& e) {
    fail(key, line, e.what());
  }
}

void validate(const ExperimentConfig& c, const KeyLines& lines) {
  auto check = [&](bool ok, const std::string& key, const std::string& why) {
    if (!ok) {
      const auto it = lines.find(key);
      fail(key, it == lines.end() ? 0 : it->second, why);
    }
  };
  check(c.grid.dim == 1 || c.grid.dim == 2, "grid.dim", "must be 1 or 2");
  for (int a = 0; a < c.grid.dim; ++a) {
    check(c.grid.n[static_cast<std::size_t>(a)] >= 4, "grid.n", "needs at least 4 nodes per axis");
    check(c.grid.L[static_cast<std::size_t>(a)] > 0.0, "grid.L", "period must be positive");
  }
  const bool nonlinear = c.flow.variant == FlowVariant::NonlinearPower;
  if (nonlinear) check(c.flow.p > 1.0, "flow.p", "p > 1 required");
  check(c.flow.forcing_amplitude >= 0.0, "flow.forcing_amplitude", "forcing must be non-negative");
  check(c.flow.forcing_rate >= 0.0, "flow.forcing_rate", "decay rate must be >= 0");

  // Sine data: 1 + amp * sum_a sin(...) >= 1 - dim * amp. Random: >= 1 - amp.
  auto amplitude_ok = [&](double amp) {
    const double reach = c.initial.shape == InitialShape::Sine ? amp * c.grid.dim : std::abs(amp);
    if (c.initial.shape == InitialShape::Constant) return true;
    return nonlinear ? reach < 1.0 : reach <= 1.0;
  };
  check(c.initial.amplitude >= 0.0, "initial.amplitude", "amplitude must be >= 0");
  check(amplitude_ok(c.initial.amplitude), "initial.amplitude",
        nonlinear ? "initial data must stay positive" : "initial data must stay non-negative");
  check(c.initial.mode >= 1, "initial.mode", "mode must be >= 1");

  check(c.controls.dt > 0.0, "controls.dt", "must be > 0");
  check(c.controls.t_end > 0.0, "controls.t_end", "must be > 0");
  check(c.controls.record_every >= 1, "controls.record_every", "must be >= 1");
  try {
    (void)c.controls.step_count();
  } catch (const Error&) {
    check(false, "controls.t_end", "must be an integer multiple of controls.dt");
  }
  if (c.controls.scheme == Scheme::Picard) {
    check(c.controls.picard_window > c.controls.dt && c.controls.picard_window <= c.controls.t_end,
          "controls.picard_window", "must satisfy dt < window <= t_end");
    try {
      (void)c.controls.steps_per_window();
    } catch (const Error&) {
      check(false, "controls.picard_window", "must be an integer multiple of controls.dt");
    }
    check(c.controls.picard_tol > 0.0, "controls.picard_tol", "must be > 0");
    check(c.controls.picard_max_iter >= 1, "controls.picard_max_iter", "must be >= 1");
  }

  check(c.diagnostics.harnack_a > 1.0, "diagnostics.harnack_a", "a > 1 required");
  check(c.diagnostics.harnack_t_floor > 0.0, "diagnostics.harnack_t_floor", "must be > 0");
  check(c.diagnostics.steady_tail_tol > 0.0, "diagnostics.steady_tail_tol", "must be > 0");
  if (c.diagnostics.stability) {
    check(c.diagnostics.stability_amplitude >= 0.0 && amplitude_ok(c.diagnostics.stability_amplitude),
          "diagnostics.stability_amplitude", "partner data violates the positivity requirement");
    check(c.diagnostics.stability_amplitude != c.initial.amplitude, "diagnostics.stability_amplitude",
          "partner data must differ from the primary data");
  }
  if (c.diagnostics.steady_oracle) {
    check(!nonlinear && c.flow.forcing_shape != ForcingShape::Zero && c.flow.forcing_amplitude > 0.0,
          "diagnostics.steady_oracle", "needs a linear flow with non-zero forcing");
  }
  if (c.diagnostics.compare_direct) {
    check(c.controls.scheme == Scheme::Picard, "diagnostics.compare_direct",
          "only meaningful for controls.scheme = picard");
  }
  check(!c.output.dir.empty(), "output.dir", "must not be empty");
}

ExperimentConfig parse_lines(const std::string& text, KeyLines& lines) {
  struct Entry {
    std::string key, value;
    int line;
  };
  std::vector<Entry> entries;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line, line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line, line_no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    entries.push_back({key, trim(line.substr(eq + 1)), line_no});
  }

  ExperimentConfig config;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].key != "preset") continue;
    if (i != 0) fail("preset", entries[i].line, "must be the first entry");
    try {
      config = load_preset(entries[i].value);
    } catch (const Error& e) {
      fail("preset", entries[i].line, e.what());
    }
  }
  for (const auto& e : entries) {
    if (e.key == "preset") continue;
    if (lines.count(e.key) != 0) fail(e.key, e.line, "duplicate key");
    set_key(config, e.key, e.value, e.line);
    lines[e.key] = e.line;
  }
  return config;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  KeyLines lines;
  ExperimentConfig config = parse_lines(text, lines);
  validate(config, lines);
  return config;
}

void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& overrides) {
  KeyLines lines;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) fail(o, 0, "override must look like key=value");
    set_key(config, trim(o.substr(0, eq)), trim(o.substr(eq + 1)), 0);
  }
  validate(config, lines);
}

void validate_config(const ExperimentConfig& config) { validate(config, {}); }

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  if (!config.preset.empty()) out << "preset = " << config.preset << '\n';
  std::string section;
  for (const auto& spec : key_table()) {
    const auto dot = spec.key.find('.');
    const std::string sec = dot == std::string::npos ? "" : spec.key.substr(0, dot);
    const std::string name = dot == std::string::npos ? spec.key : spec.key.substr(dot + 1);
    if (sec != section) {
      out << "\n[" << sec << "]\n";
      section = sec;
    }
    out << name << " = " << spec.get(config) << '\n';
  }
  return out.str();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys{"preset"};
  for (const auto& spec : key_table()) keys.push_back(spec.key);
  return keys;
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog = {
      {"linear_ground_state", "linear flow, A = 0: renormalized heat flow relaxing to the constant",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = linear
forcing = zero
[initial]
shape = sine
amplitude = 0.1
[controls]
scheme = imex
dt = 0.001
t_end = 2
record_every = 1
[diagnostics]
ledger = true
steady = true
steady_tail_tol = 1e-6
decay_rate = true
[checks]
lambda_end_max = 1e-6
uniform_dev_max = 1e-4
steady_residual_max = 1e-4
decay_rate_rel_tol = 0.05
)"},
      {"linear_forced_steady", "linear flow with A = 1 + cos(2 pi x): limit solves lap u + lambda u + A = 0",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = linear
forcing = cosine
forcing_amplitude = 1
forcing_profile = constant
[initial]
shape = sine
amplitude = 0.1
[controls]
scheme = imex
dt = 0.001
t_end = 10
record_every = 10
[diagnostics]
steady = true
steady_tail_tol = 1e-6
steady_oracle = true
[checks]
steady_residual_max = 1e-3
oracle_match_max = 1e-3
)"},
      {"nonlinear_ground_state", "nonlinear flow p = 3 from 1 + 0.3 sin(2 pi x): relaxes to u = 1, lambda = 1",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = nonlinear
p = 3
[initial]
shape = sine
amplitude = 0.3
[controls]
scheme = imex
dt = 0.001
t_end = 5
record_every = 1
[diagnostics]
ledger = true
steady = true
steady_tail_tol = 1e-6
[checks]
uniform_dev_max = 1e-4
steady_residual_max = 1e-6
)"},
      {"nonlinear_fixed_point", "nonlinear flow p = 3 from g = 1: the constant state is an exact fixed point",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = nonlinear
p = 3
[initial]
shape = constant
[controls]
scheme = imex
dt = 0.001
t_end = 1
record_every = 1
[diagnostics]
ledger = true
harnack = true
steady = true
steady_tail_tol = 1e-12
[checks]
uniform_dev_max = 1e-12
ledger_residual_max = 1e-12
steady_residual_max = 1e-12
)"},
      {"stability_pair_linear", "two nearby solutions of the A = 0 linear flow: L2/H1 gaps contract",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = linear
forcing = zero
[initial]
shape = sine
amplitude = 0.01
[controls]
scheme = imex
dt = 0.001
t_end = 0.2
record_every = 1
[diagnostics]
stability = true
stability_amplitude = 0.012
[checks]
stability_contraction = true
)"},
      {"stability_pair_nonlinear", "two nearby positive solutions of the p = 3 flow: Gronwall bound on the gaps",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = nonlinear
p = 3
[initial]
shape = sine
amplitude = 0.01
[controls]
scheme = imex
dt = 0.001
t_end = 0.2
record_every = 1
[diagnostics]
stability = true
stability_amplitude = 0.012
)"},
      {"harnack_monitor", "nonlinear flow p = 2: Li-Yau quantity F (a = 2) on t in [0.1, 2]",
       R"(
[grid]
dim = 1
n = 128
[flow]
variant = nonlinear
p = 2
[initial]
shape = sine
amplitude = 0.5
[controls]
scheme = imex
dt = 0.001
t_end = 2
record_every = 1
[diagnostics]
harnack = true
harnack_a = 2
harnack_t_floor = 0.1
log_identity = true
[checks]
log_identity_max = 1
)"},
      {"picard_vs_direct", "successive linearization on windows of 0.05 against the projected stepper",
       R"(
[grid]
dim = 1
n = 64
[flow]
variant = linear
forcing = zero
[initial]
shape = sine
amplitude = 0.1
[controls]
scheme = picard
dt = 0.0001
t_end = 0.2
record_every = 100
picard_window = 0.05
picard_tol = 1e-8
picard_max_iter = 50
[diagnostics]
compare_direct = true
[checks]
scheme_agreement_max = 1e-6
picard_iterations_max = 10
)"},
  };
  return catalog;
}

ExperimentConfig load_preset(const std::string& name) {
  for (const auto& p : preset_catalog()) {
    if (p.name != name) continue;
    ExperimentConfig config = parse_config(p.text);
    config.preset = name;
    config.output.dir = "nlheat-out/" + name;
    return config;
  }
  throw Error(ErrorKind::Config, "unknown preset '" + name + "'");
}

std::string list_presets() {
  std::ostringstream out;
  std::size_t width = 0;
  for (const auto& p : preset_catalog()) width = std::max(width, p.name.size());
  for (const auto& p : preset_catalog()) {
    out << p.name << std::string(width + 2 - p.name.size(), ' ') << p.description << '\n';
  }
  return out.str();
}

TorusGrid make_grid(const GridConfig& grid) {
  return grid.dim == 1 ? TorusGrid(grid.n[0], grid.L[0])
                       : TorusGrid(grid.n[0], grid.n[1], grid.L[0], grid.L[1]);
}

ScalarField make_initial(const TorusGrid& grid, const InitialConfig& initial, std::uint64_t seed) {
  const double two_pi = 2.0 * std::numbers::pi;
  switch (initial.shape) {
    case InitialShape::Constant:
      return ScalarField(grid, 1.0);
    case InitialShape::Sine:
      return ScalarField::sample(grid, [&](double x0, double x1) {
        double s = std::sin(two_pi * initial.mode * x0 / grid.period(0));
        if (grid.dim() == 2) s += std::sin(two_pi * initial.mode * x1 / grid.period(1));
        return 1.0 + initial.amplitude * s;
      });
    case InitialShape::Random: {
      // Raw 53-bit draws keep the field identical across standard libraries.
      std::mt19937_64 rng(seed);
      ScalarField g(grid);
      for (double& v : g.values()) {
        const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = 1.0 + initial.amplitude * (2.0 * unit - 1.0);
      }
      return g;
    }
  }
  throw Error(ErrorKind::Config, "unknown initial shape");
}

FlowSpec make_flow(const ExperimentConfig& config, const InitialConfig& initial) {
  const TorusGrid grid = make_grid(config.grid);
  ScalarField g = make_initial(grid, initial, config.seed);
  if (config.flow.variant == FlowVariant::NonlinearPower) {
    return FlowSpec::nonlinear_power(std::move(g), config.flow.p);
  }
  const double c = config.flow.forcing_amplitude;
  ScalarField a(grid);
  switch (config.flow.forcing_shape) {
    case ForcingShape::Zero:
      break;
    case ForcingShape::Constant:
      a = ScalarField(grid, c);
      break;
    case ForcingShape::Cosine:
      a = ScalarField::sample(grid, [&](double x0, double) {
        return c * (1.0 + std::cos(2.0 * std::numbers::pi * x0 / grid.period(0)));
      });
      break;
  }
  return FlowSpec::linear_forced(std::move(g),
                                 ForcingSpec(std::move(a), config.flow.forcing_profile, config.flow.forcing_rate));
}

}  // namespace nlheat
