// Campaign configuration: INI-style text with typed sections, dotted-path
// overrides shared by the CLI and the sweep axis, canonical serialization,
// and a stable 64-bit hash embedded in every output.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/disorder.hpp"
#include "core/dynamics.hpp"
#include "core/floquet.hpp"
#include "core/trajectory.hpp"
#include "core/types.hpp"

namespace rml {

struct ExperimentConfig {
  // [chain]
  int L = 42;
  double J = 2.0;
  std::string boundary = "periodic";  // "open" | "periodic"

  // [trajectory]
  std::string kind = "ellipse";  // ellipse | half-ellipse | biased-circle |
                                 // double-loop | table
  double Delta0 = 10.0;
  double Delta1 = 5.0;
  double delta0 = 2.5;
  double delta_c = 0.0;
  double period = 8.0;  // us
  double tau1 = 0.0;    // double loop; 0 means period/2
  double tau2 = 0.0;
  int orientation = 1;
  double phase0 = 0.0;
  std::vector<double> table_t;
  std::vector<double> table_Delta;
  std::vector<double> table_delta;

  // [disorder]
  std::string disorder = "none";  // none | onsite | hopping | quasiperiodic
  double strength = 0.0;          // MHz
  double alpha = 0.6180339887498949;
  double beta = 0.0;
  bool beta_random = true;

  // [stepper]
  int steps_per_period = 512;
  double norm_tol = 1e-9;

  // [run]
  std::string observable = "pumped-charge";  // pumped-charge | cycle-shift
  int ensemble = 20;
  int init_site = 0;  // 1-based; 0 picks the middle site
  int cycles = 1;
  std::uint64_t seed = 12345;

  // [sweep]
  std::string sweep_key;  // dotted path, e.g. disorder.strength
  std::vector<double> sweep_values;

  // [floquet]
  double mu = 80.0;
  double fl_phi0 = 0.0;
  double omega_bar = 4800.0;
  double g = 7.2;
  int reference = 0;
  double sample_rate = 0.0;  // samples per us; 0 means 20 * mu
  double com_tol = 0.3;      // lab-vs-target acceptance thresholds
  double pop_tol = 0.05;

  // [calib]
  double e_jj = 21.9;
  double e_c = 0.208;
  double slope = 1.0;
  double offset = 0.0;
  double eta = 1.0;

  // [grid]
  int n_k = 32;
  int n_t = 32;
  int n_time = 64;

  void validate() const;
};

// Parse and validate; errors carry file/line diagnostics.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>");

// "section.key=value" override, applied before validation; same paths as the
// sweep axis. Throws ConfigError for unknown paths or malformed values.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

// Numeric field assignment by dotted path (sweep axis mechanism).
void set_numeric(ExperimentConfig& cfg, const std::string& dotted, double value);

// Full round-trippable rendering in fixed section/key order.
std::string canonical_serialization(const ExperimentConfig& cfg);

// FNV-1a 64 over the canonical serialization.
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Domain object builders.
ChainSpec make_chain(const ExperimentConfig& cfg);
Trajectory make_trajectory(const ExperimentConfig& cfg);
DisorderConfig make_disorder(const ExperimentConfig& cfg);
StepperConfig make_stepper(const ExperimentConfig& cfg);
ModulationSpec make_modulation(const ExperimentConfig& cfg);
TransmonCalib make_calib(const ExperimentConfig& cfg);

}  // namespace rml
