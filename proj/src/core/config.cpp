#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rml {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ConfigError(where.empty() ? msg : where + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& v, const std::string& where) {
  const std::string t = trim(v);
  if (t.empty()) fail(where, "expected a number");
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(x))
    fail(where, "malformed number '" + t + "'");
  return x;
}

long parse_int(const std::string& v, const std::string& where) {
  const std::string t = trim(v);
  if (t.empty()) fail(where, "expected an integer");
  char* end = nullptr;
  const long x = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    fail(where, "malformed integer '" + t + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
  const std::string t = trim(v);
  if (t.empty() || t[0] == '-') fail(where, "expected an unsigned integer");
  char* end = nullptr;
  const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    fail(where, "malformed unsigned integer '" + t + "'");
  return x;
}

bool parse_bool(const std::string& v, const std::string& where) {
  const std::string t = trim(v);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  fail(where, "expected a boolean, got '" + t + "'");
}

// Comma-separated numbers; each element may also be an inclusive linspace
// written start:stop:count.
std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(where, "empty list element");
    const std::size_t c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_double(item, where));
      continue;
    }
    const std::size_t c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos)
      fail(where, "range needs start:stop:count, got '" + item + "'");
    const double start = parse_double(item.substr(0, c1), where);
    const double stop = parse_double(item.substr(c1 + 1, c2 - c1 - 1), where);
    const long count = parse_int(item.substr(c2 + 1), where);
    if (count < 2) fail(where, "range count must be at least 2");
    for (long i = 0; i < count; ++i)
      out.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
  }
  if (out.empty()) fail(where, "expected a nonempty list");
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

// One assignment path shared by file parsing, --set overrides, and the sweep
// axis. `where` prefixes error messages with file:line or the override text.
void assign(ExperimentConfig& cfg, const std::string& path,
            const std::string& value, const std::string& where) {
  auto num = [&] { return parse_double(value, where); };
  auto integer = [&] { return static_cast<int>(parse_int(value, where)); };

  if (path == "chain.L") cfg.L = integer();
  else if (path == "chain.J") cfg.J = num();
  else if (path == "chain.boundary") cfg.boundary = trim(value);
  else if (path == "trajectory.kind") cfg.kind = trim(value);
  else if (path == "trajectory.Delta0") cfg.Delta0 = num();
  else if (path == "trajectory.Delta1") cfg.Delta1 = num();
  else if (path == "trajectory.delta0") cfg.delta0 = num();
  else if (path == "trajectory.delta_c") cfg.delta_c = num();
  else if (path == "trajectory.period") cfg.period = num();
  else if (path == "trajectory.tau1") cfg.tau1 = num();
  else if (path == "trajectory.tau2") cfg.tau2 = num();
  else if (path == "trajectory.orientation") cfg.orientation = integer();
  else if (path == "trajectory.phase0") cfg.phase0 = num();
  else if (path == "trajectory.table_t") cfg.table_t = parse_list(value, where);
  else if (path == "trajectory.table_Delta") cfg.table_Delta = parse_list(value, where);
  else if (path == "trajectory.table_delta") cfg.table_delta = parse_list(value, where);
  else if (path == "disorder.kind") cfg.disorder = trim(value);
  else if (path == "disorder.strength") cfg.strength = num();
  else if (path == "disorder.alpha") cfg.alpha = num();
  else if (path == "disorder.beta") cfg.beta = num();
  else if (path == "disorder.beta_random") cfg.beta_random = parse_bool(value, where);
  else if (path == "stepper.steps_per_period") cfg.steps_per_period = integer();
  else if (path == "stepper.norm_tol") cfg.norm_tol = num();
  else if (path == "run.observable") cfg.observable = trim(value);
  else if (path == "run.ensemble") cfg.ensemble = integer();
  else if (path == "run.init_site") cfg.init_site = integer();
  else if (path == "run.cycles") cfg.cycles = integer();
  else if (path == "run.seed") cfg.seed = parse_u64(value, where);
  else if (path == "sweep.key") cfg.sweep_key = trim(value);
  else if (path == "sweep.values") cfg.sweep_values = parse_list(value, where);
  else if (path == "floquet.mu") cfg.mu = num();
  else if (path == "floquet.phi0") cfg.fl_phi0 = num();
  else if (path == "floquet.omega_bar") cfg.omega_bar = num();
  else if (path == "floquet.g") cfg.g = num();
  else if (path == "floquet.reference") cfg.reference = integer();
  else if (path == "floquet.sample_rate") cfg.sample_rate = num();
  else if (path == "floquet.com_tol") cfg.com_tol = num();
  else if (path == "floquet.pop_tol") cfg.pop_tol = num();
  else if (path == "calib.e_jj") cfg.e_jj = num();
  else if (path == "calib.e_c") cfg.e_c = num();
  else if (path == "calib.slope") cfg.slope = num();
  else if (path == "calib.offset") cfg.offset = num();
  else if (path == "calib.eta") cfg.eta = num();
  else if (path == "grid.n_k") cfg.n_k = integer();
  else if (path == "grid.n_t") cfg.n_t = integer();
  else if (path == "grid.n_time") cfg.n_time = integer();
  else fail(where, "unknown key '" + path + "'");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  std::stringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(where, "empty section name");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(where, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    if (section.empty()) fail(where, "key outside any [section]");
    const std::string path = section + "." + key;
    if (std::find(seen.begin(), seen.end(), path) != seen.end())
      fail(where, "duplicate key '" + path + "'");
    seen.push_back(path);
    assign(cfg, path, value, where);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override needs section.key=value, got '" + assignment + "'");
  const std::string path = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  assign(cfg, path, value, "--set " + path);
}

void set_numeric(ExperimentConfig& cfg, const std::string& dotted, double value) {
  assign(cfg, dotted, format_double(value), "sweep axis " + dotted);
}

void ExperimentConfig::validate() const {
  if (boundary != "open" && boundary != "periodic")
    throw ConfigError("chain.boundary must be open or periodic");
  if (kind != "ellipse" && kind != "half-ellipse" && kind != "biased-circle" &&
      kind != "double-loop" && kind != "table")
    throw ConfigError("trajectory.kind '" + kind + "' is not recognized");
  if (disorder != "none" && disorder != "onsite" && disorder != "hopping" &&
      disorder != "quasiperiodic")
    throw ConfigError("disorder.kind '" + disorder + "' is not recognized");
  if (observable != "pumped-charge" && observable != "cycle-shift")
    throw ConfigError("run.observable must be pumped-charge or cycle-shift");
  if (ensemble < 1) throw ConfigError("run.ensemble must be at least 1");
  if (cycles < 1) throw ConfigError("run.cycles must be at least 1");
  if (init_site < 0 || init_site > L)
    throw ConfigError("run.init_site out of range (0 picks the middle)");
  if (!sweep_key.empty()) {
    if (sweep_values.empty())
      throw ConfigError("sweep.values must be nonempty when sweep.key is set");
    const bool inc = sweep_values.size() < 2 ||
                     sweep_values[1] > sweep_values[0];
    for (std::size_t i = 1; i < sweep_values.size(); ++i) {
      const bool step_inc = sweep_values[i] > sweep_values[i - 1];
      if (step_inc != inc || sweep_values[i] == sweep_values[i - 1])
        throw ConfigError("sweep.values must be strictly monotone");
    }
    ExperimentConfig probe = *this;
    probe.sweep_key.clear();
    set_numeric(probe, sweep_key, sweep_values.front());
  }
  // Domain-level constraints surface here with config wording.
  make_chain(*this);
  make_trajectory(*this).validate();
  make_disorder(*this).validate();
  make_calib(*this).validate();
  make_modulation(*this).validate();
  if (steps_per_period < 64)
    throw ConfigError("stepper.steps_per_period must be at least 64");
  if (!(norm_tol > 0)) throw ConfigError("stepper.norm_tol must be positive");
  if (n_k < 16 || n_t < 16) throw ConfigError("grid.n_k and grid.n_t must be >= 16");
  if (n_time < 64) throw ConfigError("grid.n_time must be >= 64");
}

std::string canonical_serialization(const ExperimentConfig& cfg) {
  std::string s;
  auto kv = [&](const char* k, const std::string& v) {
    s += k;
    s += " = ";
    s += v;
    s += "\n";
  };
  s += "[chain]\n";
  kv("L", std::to_string(cfg.L));
  kv("J", format_double(cfg.J));
  kv("boundary", cfg.boundary);
  s += "\n[trajectory]\n";
  kv("kind", cfg.kind);
  kv("Delta0", format_double(cfg.Delta0));
  kv("Delta1", format_double(cfg.Delta1));
  kv("delta0", format_double(cfg.delta0));
  kv("delta_c", format_double(cfg.delta_c));
  kv("period", format_double(cfg.period));
  kv("tau1", format_double(cfg.tau1));
  kv("tau2", format_double(cfg.tau2));
  kv("orientation", std::to_string(cfg.orientation));
  kv("phase0", format_double(cfg.phase0));
  if (!cfg.table_t.empty()) kv("table_t", format_list(cfg.table_t));
  if (!cfg.table_Delta.empty()) kv("table_Delta", format_list(cfg.table_Delta));
  if (!cfg.table_delta.empty()) kv("table_delta", format_list(cfg.table_delta));
  s += "\n[disorder]\n";
  kv("kind", cfg.disorder);
  kv("strength", format_double(cfg.strength));
  kv("alpha", format_double(cfg.alpha));
  kv("beta", format_double(cfg.beta));
  kv("beta_random", cfg.beta_random ? "true" : "false");
  s += "\n[stepper]\n";
  kv("steps_per_period", std::to_string(cfg.steps_per_period));
  kv("norm_tol", format_double(cfg.norm_tol));
  s += "\n[run]\n";
  kv("observable", cfg.observable);
  kv("ensemble", std::to_string(cfg.ensemble));
  kv("init_site", std::to_string(cfg.init_site));
  kv("cycles", std::to_string(cfg.cycles));
  kv("seed", std::to_string(cfg.seed));
  s += "\n[sweep]\n";
  if (!cfg.sweep_key.empty()) {
    kv("key", cfg.sweep_key);
    kv("values", format_list(cfg.sweep_values));
  }
  s += "\n[floquet]\n";
  kv("mu", format_double(cfg.mu));
  kv("phi0", format_double(cfg.fl_phi0));
  kv("omega_bar", format_double(cfg.omega_bar));
  kv("g", format_double(cfg.g));
  kv("reference", std::to_string(cfg.reference));
  kv("sample_rate", format_double(cfg.sample_rate));
  kv("com_tol", format_double(cfg.com_tol));
  kv("pop_tol", format_double(cfg.pop_tol));
  s += "\n[calib]\n";
  kv("e_jj", format_double(cfg.e_jj));
  kv("e_c", format_double(cfg.e_c));
  kv("slope", format_double(cfg.slope));
  kv("offset", format_double(cfg.offset));
  kv("eta", format_double(cfg.eta));
  s += "\n[grid]\n";
  kv("n_k", std::to_string(cfg.n_k));
  kv("n_t", std::to_string(cfg.n_t));
  kv("n_time", std::to_string(cfg.n_time));
  return s;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = canonical_serialization(cfg);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ChainSpec make_chain(const ExperimentConfig& cfg) {
  ChainSpec chain;
  chain.L = cfg.L;
  chain.J = cfg.J;
  chain.boundary =
      cfg.boundary == "open" ? Boundary::Open : Boundary::Periodic;
  chain.validate();
  return chain;
}

Trajectory make_trajectory(const ExperimentConfig& cfg) {
  Trajectory t;
  if (cfg.kind != "ellipse" && cfg.kind != "half-ellipse" &&
      cfg.kind != "biased-circle" && cfg.kind != "double-loop" &&
      cfg.kind != "table")
    throw ConfigError("trajectory.kind '" + cfg.kind + "' is not recognized");
  if (cfg.kind == "ellipse") {
    t = Trajectory::ellipse(cfg.Delta0, cfg.delta0, cfg.period,
                            cfg.orientation, cfg.phase0);
  } else if (cfg.kind == "half-ellipse") {
    t = Trajectory::half_ellipse(cfg.Delta0, cfg.delta0, cfg.period);
    t.orientation = cfg.orientation;
    t.phase0 = cfg.phase0;
  } else if (cfg.kind == "biased-circle") {
    t = Trajectory::biased_circle(cfg.Delta0, cfg.delta0, cfg.delta_c,
                                  cfg.period);
    t.orientation = cfg.orientation;
    t.phase0 = cfg.phase0;
  } else if (cfg.kind == "double-loop") {
    const double tau1 = cfg.tau1 > 0 ? cfg.tau1 : cfg.period / 2;
    const double tau2 = cfg.tau2 > 0 ? cfg.tau2 : cfg.period / 2;
    t = Trajectory::double_loop(cfg.Delta0, cfg.Delta1, cfg.delta0, tau1, tau2);
    t.orientation = cfg.orientation;
  } else if (cfg.kind == "table") {
    if (cfg.table_t.size() != cfg.table_Delta.size() ||
        cfg.table_t.size() != cfg.table_delta.size())
      throw ConfigError("trajectory.table_* lists must have equal length");
    t.kind = TrajectoryKind::Table;
    t.table_t = cfg.table_t;
    for (std::size_t i = 0; i < cfg.table_t.size(); ++i)
      t.table_p.push_back({cfg.table_Delta[i], cfg.table_delta[i]});
    t.period = cfg.table_t.empty() ? 0.0 : cfg.table_t.back();
    t.orientation = cfg.orientation;
  }
  t.validate();
  return t;
}

DisorderConfig make_disorder(const ExperimentConfig& cfg) {
  DisorderConfig d;
  if (cfg.disorder == "none") d.kind = DisorderKind::None;
  else if (cfg.disorder == "onsite") d.kind = DisorderKind::OnsiteUniform;
  else if (cfg.disorder == "hopping") d.kind = DisorderKind::HoppingUniform;
  else d.kind = DisorderKind::QuasiPeriodicIntracell;
  d.strength = cfg.strength;
  d.alpha = cfg.alpha;
  d.beta = cfg.beta;
  d.beta_random = cfg.beta_random;
  d.master_seed = cfg.seed;
  d.validate();
  return d;
}

StepperConfig make_stepper(const ExperimentConfig& cfg) {
  StepperConfig s;
  s.steps_per_period = cfg.steps_per_period;
  s.norm_tol = cfg.norm_tol;
  return s;
}

ModulationSpec make_modulation(const ExperimentConfig& cfg) {
  ModulationSpec m;
  m.mu = cfg.mu;
  m.phi0 = cfg.fl_phi0;
  m.omega_bar = cfg.omega_bar;
  m.reference = cfg.reference;
  return m;
}

TransmonCalib make_calib(const ExperimentConfig& cfg) {
  TransmonCalib c;
  c.e_jj = cfg.e_jj;
  c.e_c = cfg.e_c;
  c.slope = cfg.slope;
  c.offset = cfg.offset;
  c.eta = cfg.eta;
  return c;
}

}  // namespace rml
