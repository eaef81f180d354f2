#include "core/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "core/model.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"
#include "core/topology.hpp"

namespace rml {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int middle_site(const ExperimentConfig& cfg) {
  return cfg.init_site > 0 ? cfg.init_site : (cfg.L + 1) / 2;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest_header(std::ostream& out, const ExperimentConfig& cfg,
                           const char* subcommand) {
  out << "{\n"
      << "  \"subcommand\": \"" << subcommand << "\",\n"
      << "  \"code_version\": \"" << kVersion << "\",\n"
      << "  \"config_hash\": \"" << hash_hex(config_hash(cfg)) << "\",\n"
      << "  \"seed\": " << cfg.seed << ",\n";
}

std::string csv_safe(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return t;
}

void stamp(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# config " << hash_hex(config_hash(cfg)) << " seed " << cfg.seed
      << "\n";
}

}  // namespace

double realize_observable(const ExperimentConfig& cfg, std::uint64_t index) {
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const StepperConfig stepper = make_stepper(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, index);
  if (cfg.observable == "pumped-charge")
    return pumped_charge(chain, traj, dis, 0.0, stepper);
  const EvolutionResult evo = evolve_single_excitation(
      chain, traj, dis, middle_site(cfg), cfg.cycles, stepper);
  if (evo.edge_contaminated)
    throw QualityError("edge contamination during cycle-shift run");
  double mean = 0.0;
  for (double s : evo.cycle_shift) mean += s;
  return mean / static_cast<double>(evo.cycle_shift.size());
}

SweepResult run_sweep(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  if (threads < 1) throw ConfigError("need at least one worker thread");
  const auto t_start = std::chrono::steady_clock::now();

  std::vector<double> grid = cfg.sweep_values;
  std::vector<ExperimentConfig> point_cfgs;
  if (cfg.sweep_key.empty()) {
    grid = {0.0};
    point_cfgs.push_back(cfg);
  } else {
    for (double v : grid) {
      ExperimentConfig pc = cfg;
      pc.sweep_key.clear();
      pc.sweep_values.clear();
      set_numeric(pc, cfg.sweep_key, v);
      pc.validate();
      point_cfgs.push_back(std::move(pc));
    }
  }

  const int n_points = static_cast<int>(point_cfgs.size());
  const int n_real = cfg.ensemble;
  const int n_tasks = n_points * n_real;
  std::vector<std::vector<RealizationOutcome>> raw(
      static_cast<std::size_t>(n_points));
  for (auto& row : raw) row.resize(static_cast<std::size_t>(n_real));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const int pi = task / n_real;
      const int ri = task % n_real;
      RealizationOutcome& slot =
          raw[static_cast<std::size_t>(pi)][static_cast<std::size_t>(ri)];
      slot.seed = substream_seed(cfg.seed, static_cast<std::uint64_t>(ri));
      try {
        slot.value = realize_observable(point_cfgs[static_cast<std::size_t>(pi)],
                                        static_cast<std::uint64_t>(ri));
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  SweepResult result;
  result.config = cfg;
  result.config_hash_value = config_hash(cfg);
  result.total_realizations = n_tasks;
  for (int pi = 0; pi < n_points; ++pi) {
    SweepPoint point;
    point.sweep_value = grid[static_cast<std::size_t>(pi)];
    point.L = point_cfgs[static_cast<std::size_t>(pi)].L;
    point.period = point_cfgs[static_cast<std::size_t>(pi)].period;
    point.raw = raw[static_cast<std::size_t>(pi)];
    double sum = 0.0;
    for (const auto& r : point.raw)
      if (r.error.empty()) {
        sum += r.value;
        ++point.n_ok;
      } else {
        ++result.failed_realizations;
      }
    if (point.n_ok > 0) point.mean = sum / point.n_ok;
    if (point.n_ok >= 2) {
      double ss = 0.0;
      for (const auto& r : point.raw)
        if (r.error.empty()) ss += (r.value - point.mean) * (r.value - point.mean);
      point.stderr_mean = std::sqrt(ss / (point.n_ok - 1)) /
                          std::sqrt(static_cast<double>(point.n_ok));
    } else {
      point.single_sample = point.n_ok == 1;
    }
    std::cerr << "sweep point " << fmt(point.sweep_value) << ": mean "
              << fmt(point.mean) << ", stderr " << fmt(point.stderr_mean)
              << ", n " << point.n_ok << "\n";
    result.points.push_back(std::move(point));
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

bool sweep_quality_ok(const SweepResult& result) {
  return result.total_realizations == 0 ||
         result.failed_realizations * 10 <= result.total_realizations;
}

void emit_sweep(const SweepResult& result, const std::string& out_dir) {
  {
    std::ofstream out = open_out(out_dir, "summary.csv");
    stamp(out, result.config);
    out << "sweep_value,mean,stderr,n,L,T,seed\n";
    for (const auto& p : result.points)
      out << fmt(p.sweep_value) << ',' << fmt(p.mean) << ','
          << fmt(p.stderr_mean) << ',' << p.n_ok << ',' << p.L << ','
          << fmt(p.period) << ',' << result.config.seed << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "raw.csv");
    stamp(out, result.config);
    out << "sweep_value,realization,seed,value,status\n";
    for (const auto& p : result.points)
      for (std::size_t ri = 0; ri < p.raw.size(); ++ri) {
        const auto& r = p.raw[ri];
        out << fmt(p.sweep_value) << ',' << ri << ',' << r.seed << ','
            << fmt(r.error.empty() ? r.value : 0.0) << ','
            << (r.error.empty() ? "ok" : csv_safe(r.error)) << "\n";
      }
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, result.config, "sweep");
    out << "  \"elapsed_seconds\": " << fmt(result.elapsed_seconds) << ",\n"
        << "  \"total_realizations\": " << result.total_realizations << ",\n"
        << "  \"failed_realizations\": " << result.failed_realizations << ",\n"
        << "  \"points\": [\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      const auto& p = result.points[i];
      out << "    {\"sweep_value\": " << fmt(p.sweep_value)
          << ", \"mean\": " << fmt(p.mean)
          << ", \"stderr\": " << fmt(p.stderr_mean) << ", \"n\": " << p.n_ok
          << (p.single_sample ? ", \"single_sample\": true" : "") << "}"
          << (i + 1 < result.points.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
  }
  {
    std::ofstream out = open_out(out_dir, "config_resolved.ini");
    stamp(out, result.config);
    out << canonical_serialization(result.config);
  }
}

void run_sweep_cmd(const ExperimentConfig& cfg, const std::string& out_dir,
                   int threads) {
  if (cfg.sweep_key.empty())
    throw ConfigError("sweep: config must set sweep.key and sweep.values");
  const SweepResult result = run_sweep(cfg, threads);
  emit_sweep(result, out_dir);
  for (const auto& p : result.points)
    std::cout << fmt(p.sweep_value) << " " << fmt(p.mean) << " "
              << fmt(p.stderr_mean) << " " << p.n_ok << "\n";
  if (!sweep_quality_ok(result))
    throw QualityError("more than 10% of realizations failed");
}

void run_pump(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  const auto t_start = std::chrono::steady_clock::now();
  const EvolutionResult evo = evolve_single_excitation(
      chain, traj, dis, middle_site(cfg), cfg.cycles, make_stepper(cfg));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  {
    std::ofstream out = open_out(out_dir, "populations.csv");
    stamp(out, cfg);
    out << "t_us,site,population\n";
    for (std::size_t s = 0; s < evo.times.size(); ++s)
      for (std::size_t j = 0; j < evo.populations[s].size(); ++j)
        out << fmt(evo.times[s]) << ',' << (j + 1) << ','
            << fmt(evo.populations[s][j]) << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "com.csv");
    stamp(out, cfg);
    out << "t_us,com\n";
    for (std::size_t s = 0; s < evo.times.size(); ++s)
      out << fmt(evo.times[s]) << ',' << fmt(evo.com[s]) << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "cycles.csv");
    stamp(out, cfg);
    out << "cycle,shift\n";
    for (std::size_t m = 0; m < evo.cycle_shift.size(); ++m)
      out << (m + 1) << ',' << fmt(evo.cycle_shift[m]) << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, cfg, "pump");
    out << "  \"elapsed_seconds\": " << fmt(elapsed) << ",\n"
        << "  \"init_site\": " << middle_site(cfg) << ",\n"
        << "  \"edge_contaminated\": "
        << (evo.edge_contaminated ? "true" : "false") << ",\n"
        << "  \"max_norm_drift\": " << fmt(evo.max_norm_drift) << ",\n"
        << "  \"cycle_shift\": [";
    for (std::size_t m = 0; m < evo.cycle_shift.size(); ++m)
      out << (m ? ", " : "") << fmt(evo.cycle_shift[m]);
    out << "]\n}\n";
  }
  for (std::size_t m = 0; m < evo.cycle_shift.size(); ++m)
    std::cout << "cycle " << (m + 1) << ": shift " << fmt(evo.cycle_shift[m])
              << "\n";
  if (evo.edge_contaminated)
    throw QualityError("wavepacket reached the chain edge");
}

void run_chern_cmd(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const Trajectory traj = make_trajectory(cfg);
  const int nu = chern_number(traj, cfg.J, cfg.n_k, cfg.n_t);
  const double dp = delta_polarization(traj, cfg.J);
  {
    std::ofstream out = open_out(out_dir, "chern.csv");
    stamp(out, cfg);
    out << "n_k,n_t,chern,delta_polarization\n";
    out << cfg.n_k << ',' << cfg.n_t << ',' << nu << ',' << fmt(dp) << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, cfg, "chern");
    out << "  \"chern\": " << nu << ",\n"
        << "  \"delta_polarization\": " << fmt(dp) << "\n}\n";
  }
  std::cout << "chern = " << nu << "\n";
}

void run_bands_cmd(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  std::ofstream out = open_out(out_dir, "bands.csv");
  stamp(out, cfg);
  out << "t_us,index,energy_MHz\n";
  for (int i = 0; i < cfg.n_time; ++i) {
    const double t = traj.period * i / cfg.n_time;
    const Vec w = eigh_values(build_single_particle(chain, traj.sample(t), dis));
    for (int m = 0; m < w.size(); ++m)
      out << fmt(t) << ',' << m << ',' << fmt(w(m)) << "\n";
  }
  std::ofstream man = open_out(out_dir, "manifest.json");
  write_manifest_header(man, cfg, "bands");
  man << "  \"n_time\": " << cfg.n_time << "\n}\n";
  std::cout << "bands: " << cfg.n_time << " time samples, L = " << cfg.L << "\n";
}

void run_gap_cmd(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  const GapReport rep = min_instantaneous_gap(chain, traj, dis, cfg.n_time);
  {
    std::ofstream out = open_out(out_dir, "gap.csv");
    stamp(out, cfg);
    out << "t_us,gap_MHz\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      out << fmt(rep.times[i]) << ',' << fmt(rep.gaps[i]) << "\n";
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, cfg, "gap");
    out << "  \"min_gap_MHz\": " << fmt(rep.minimum) << ",\n"
        << "  \"t_argmin_us\": " << fmt(rep.t_argmin) << "\n}\n";
  }
  std::cout << "min gap = " << fmt(rep.minimum) << " MHz at t = "
            << fmt(rep.t_argmin) << " us\n";
}

void run_ipr_cmd(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  const EigenSystem es =
      eigh(build_single_particle(chain, traj.sample(0.0), dis));
  std::ofstream out = open_out(out_dir, "ipr.csv");
  stamp(out, cfg);
  out << "index,energy_MHz,ipr\n";
  double mean = 0.0;
  for (int m = 0; m < es.values.size(); ++m) {
    const double v = ipr(es.vectors.col(m).cast<complexd>());
    mean += v;
    out << m << ',' << fmt(es.values(m)) << ',' << fmt(v) << "\n";
  }
  mean /= static_cast<double>(es.values.size());
  std::ofstream man = open_out(out_dir, "manifest.json");
  write_manifest_header(man, cfg, "ipr");
  man << "  \"mean_ipr\": " << fmt(mean) << "\n}\n";
  std::cout << "mean ipr = " << fmt(mean) << "\n";
}

void run_pulse_cmd(const ExperimentConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  const ModulationSpec spec = make_modulation(cfg);
  const double rate = cfg.sample_rate > 0 ? cfg.sample_rate : 20.0 * spec.mu;
  const std::vector<double> times = sample_grid(traj.period, rate);
  const std::vector<double> eta(static_cast<std::size_t>(chain.L), cfg.eta);

  auto bond = [&](int b, double t) {
    return chain.J + stagger_bond(b) * (traj.sample(t).delta +
                                        dis.hopping[static_cast<std::size_t>(b)]);
  };
  const AmplitudeSolution amps = solve_amplitudes(
      chain, bond, cfg.g, eta, spec.mu, spec.reference, times, true);
  Mat delta_targets(chain.L, static_cast<int>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ParamPoint p = traj.sample(times[i]);
    for (int j = 0; j < chain.L; ++j)
      delta_targets(j, static_cast<int>(i)) =
          stagger_site(j) * p.Delta + dis.onsite[static_cast<std::size_t>(j)];
  }
  const PulseProgram prog = synthesize_waveforms(delta_targets, amps, spec, rate);
  {
    std::ofstream out = open_out(out_dir, "pulse.csv");
    stamp(out, cfg);
    write_pulse_table(out, prog, make_calib(cfg));
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, cfg, "pulse");
    out << "  \"mu_MHz\": " << fmt(spec.mu) << ",\n"
        << "  \"omega_bar_MHz\": " << fmt(spec.omega_bar) << ",\n"
        << "  \"samples\": " << prog.times.size() << ",\n"
        << "  \"max_amplitude_MHz\": "
        << fmt(prog.amplitude.cwiseAbs().maxCoeff()) << "\n}\n";
  }
  std::cout << "pulse: " << prog.times.size() << " samples, max amplitude "
            << fmt(prog.amplitude.cwiseAbs().maxCoeff()) << " MHz\n";
}

void run_floquet_check_cmd(const ExperimentConfig& cfg,
                           const std::string& out_dir) {
  cfg.validate();
  const ChainSpec chain = make_chain(cfg);
  const Trajectory traj = make_trajectory(cfg);
  const DisorderRealization dis = realize(make_disorder(cfg), chain, 0);
  const FloquetCheckResult res =
      run_floquet_check(chain, traj, dis, cfg.g, make_modulation(cfg),
                        middle_site(cfg), cfg.sample_rate, make_stepper(cfg));
  {
    std::ofstream out = open_out(out_dir, "comparison.csv");
    stamp(out, cfg);
    out << "t_us,com_lab,com_target\n";
    const int probes = 257;
    const double span =
        std::min(res.lab.times.back(), res.target.times.back());
    for (int i = 0; i < probes; ++i) {
      const double t = span * i / (probes - 1);
      auto series_at = [&](const EvolutionResult& evo) {
        const auto it =
            std::upper_bound(evo.times.begin(), evo.times.end(), t);
        const std::size_t hi = it == evo.times.begin()
                                   ? 1
                                   : std::min<std::size_t>(
                                         it - evo.times.begin(),
                                         evo.times.size() - 1);
        const std::size_t lo = hi - 1;
        const double w = (t - evo.times[lo]) / (evo.times[hi] - evo.times[lo]);
        return (1.0 - w) * evo.com[lo] + w * evo.com[hi];
      };
      out << fmt(t) << ',' << fmt(series_at(res.lab)) << ','
          << fmt(series_at(res.target)) << "\n";
    }
  }
  {
    std::ofstream out = open_out(out_dir, "manifest.json");
    write_manifest_header(out, cfg, "floquet-check");
    out << "  \"mu_MHz\": " << fmt(cfg.mu) << ",\n"
        << "  \"nyquist_pass\": " << (res.nyquist.pass ? "true" : "false")
        << ",\n"
        << "  \"nyquist_margin_MHz\": " << fmt(res.nyquist.margin) << ",\n"
        << "  \"adiabatic_pass\": " << (res.adiabatic.pass ? "true" : "false")
        << ",\n"
        << "  \"max_com_diff\": " << fmt(res.comparison.max_com_diff) << ",\n"
        << "  \"max_pop_diff\": " << fmt(res.comparison.max_pop_diff) << ",\n"
        << "  \"com_tol\": " << fmt(cfg.com_tol) << ",\n"
        << "  \"pop_tol\": " << fmt(cfg.pop_tol) << "\n}\n";
  }
  std::cout << "floquet check: com diff " << fmt(res.comparison.max_com_diff)
            << " sites, pop diff " << fmt(res.comparison.max_pop_diff)
            << ", nyquist " << (res.nyquist.pass ? "pass" : "fail")
            << ", adiabatic " << (res.adiabatic.pass ? "pass" : "fail") << "\n";
  if (res.comparison.max_com_diff > cfg.com_tol ||
      res.comparison.max_pop_diff > cfg.pop_tol)
    throw QualityError("lab and target frames disagree beyond tolerances");
}

}  // namespace rml
