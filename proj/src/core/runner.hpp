// Campaign orchestration: seeded disorder ensembles on a worker pool with
// deterministic index-ordered aggregation, plus the per-subcommand drivers
// and file emitters behind the CLI.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/config.hpp"

namespace rml {

struct RealizationOutcome {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string error;  // empty on success
};

struct SweepPoint {
  double sweep_value = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;  // sample std / sqrt(n)
  int n_ok = 0;
  bool single_sample = false;
  int L = 0;
  double period = 0.0;
  std::vector<RealizationOutcome> raw;  // realization index order
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepPoint> points;
  std::uint64_t config_hash_value = 0;
  double elapsed_seconds = 0.0;
  int total_realizations = 0;
  int failed_realizations = 0;
};

// Observable of one disorder realization under the given config:
// pumped-charge (half filling, one cycle) or cycle-shift (single excitation,
// mean per-cycle CoM displacement).
double realize_observable(const ExperimentConfig& cfg, std::uint64_t index);

// Runs ensemble x sweep-grid on `threads` workers. Outputs are a pure
// function of (config, seed): results land in index-addressed slots and are
// aggregated in order, so the thread count never changes a byte.
SweepResult run_sweep(const ExperimentConfig& cfg, int threads = 1);

// True when at most 10% of realizations failed.
bool sweep_quality_ok(const SweepResult& result);

// summary.csv, raw.csv, manifest.json, config_resolved.ini. Re-emission of
// the same result is byte-identical.
void emit_sweep(const SweepResult& result, const std::string& out_dir);

// Subcommand drivers; they write files under out_dir, print a summary to
// standard output, and throw QualityError for quality failures (edge
// contamination, threshold breaches) after emitting.
void run_pump(const ExperimentConfig& cfg, const std::string& out_dir);
void run_sweep_cmd(const ExperimentConfig& cfg, const std::string& out_dir,
                   int threads);
void run_chern_cmd(const ExperimentConfig& cfg, const std::string& out_dir);
void run_bands_cmd(const ExperimentConfig& cfg, const std::string& out_dir);
void run_gap_cmd(const ExperimentConfig& cfg, const std::string& out_dir);
void run_ipr_cmd(const ExperimentConfig& cfg, const std::string& out_dir);
void run_pulse_cmd(const ExperimentConfig& cfg, const std::string& out_dir);
void run_floquet_check_cmd(const ExperimentConfig& cfg,
                           const std::string& out_dir);

}  // namespace rml
