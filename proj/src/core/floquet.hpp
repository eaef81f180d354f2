// Frequency-modulation synthesis: turn a target time-dependent chain into
// per-qubit drive waveforms via the zeroth-Bessel coupling law, validate the
// carrier choice (Nyquist, adiabaticity), verify lab-frame equivalence, and
// transduce frequencies to Z-pulse amplitudes.
#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "core/disorder.hpp"
#include "core/dynamics.hpp"
#include "core/trajectory.hpp"
#include "core/types.hpp"

namespace rml {

// J_n for any integer order and real argument.
double bessel_j(int n, double x);

// Inverse of J0 on its first monotone branch [0, first zero); accepts
// y in (0, 1]. With extended = true the branch continues to the first
// extremum (~3.8317) and y may go down to J0's minimum (~-0.4028).
double bessel_j0_inverse(double y, bool extended = false);

// g * J0((eta_j A_j - eta_j1 A_j1) / mu)
double effective_coupling(double g, double A_j, double A_j1, double eta_j,
                          double eta_j1, double mu);

struct ModulationSpec {
  double mu = 80.0;           // carrier [MHz, cyclic]
  double phi0 = 0.0;          // common drive phase [rad]
  double omega_bar = 4800.0;  // frame frequency [MHz]
  int reference = 0;          // 1-based qubit with A == 0; 0 picks the middle
  void validate() const;
};

struct TransmonCalib {
  double e_jj = 21.9;   // junction energy [GHz]
  double e_c = 0.208;   // charging energy [GHz]
  double slope = 1.0;   // flux map slope [rad/V]
  double offset = 0.0;  // flux map offset [rad]
  double eta = 1.0;     // drive scale factor
  void validate() const;
};

// Uniform grid over [0, duration] with at least `rate` samples per us,
// endpoint included.
std::vector<double> sample_grid(double duration, double rate);

struct AmplitudeSolution {
  std::vector<double> times;      // us
  Mat amplitudes;                 // L x n_times, A_j in MHz, reference row 0
  std::vector<int> branch_signs;  // per bond, the chosen recursion branch
};

// Bond-by-bond outward recursion from the reference qubit. bond_target(b, t)
// returns the signed hopping amplitude wanted on bond b at time t; its
// magnitude is realized (|target|/g feeds the Bessel inverse), so it must be
// nonzero and at most g at every sample. Per bond, the recursion branch is
// fixed once, picking the smaller max_t |A|.
AmplitudeSolution solve_amplitudes(
    const ChainSpec& chain, const std::function<double(int, double)>& bond_target,
    double g, const std::vector<double>& eta, double mu, int reference,
    const std::vector<double>& times, bool allow_beyond_first_zero = false);

struct PulseProgram {
  std::vector<double> times;  // us
  double sample_rate = 0.0;   // samples per us
  double mu = 0.0;
  double phi0 = 0.0;
  double omega_bar = 0.0;
  Mat delta;      // L x n_times, slow detuning targets [MHz]
  Mat amplitude;  // L x n_times, drive amplitudes [MHz]
  Mat omega;      // L x n_times, full frequency waveforms [MHz]
  void validate() const;  // |omega - omega_bar - delta| <= |amplitude|
};

// omega_j(t) = omega_bar + delta_j(t) + A_j(t) sin(mu t + phi0), sampled at
// >= 20 samples per carrier cycle.
PulseProgram synthesize_waveforms(const Mat& delta_targets,
                                  const AmplitudeSolution& amps,
                                  const ModulationSpec& spec,
                                  double sample_rate);

struct NyquistReport {
  bool pass = false;
  double margin = 0.0;     // mu - 2 max|Delta| [MHz]
  double max_delta = 0.0;  // max_t |Delta(t)| [MHz]
};
NyquistReport check_nyquist(double max_abs_delta, double mu);
NyquistReport check_nyquist(const Trajectory& traj, double mu);

struct AdiabaticReport {
  bool pass = false;
  double delta_cutoff = 0.0;  // smallest frequency holding 1-fraction of the
  double Delta_cutoff = 0.0;  // non-DC power of each schedule [MHz]
  double ratio_delta = 0.0;   // cutoffs over mu
  double ratio_Delta = 0.0;
};
AdiabaticReport check_adiabatic(const Trajectory& traj, double mu,
                                double cutoff_fraction = 0.01);

// Closed-form sideband weight of harmonic s on a modulated bond, and the
// truncated double-sum it resums to (kept for cross-checking).
complexd sideband_coefficient(int s, double A_j, double A_j1, double mu,
                              double phi0 = 0.0);
complexd sideband_coefficient_double_sum(int s, double A_j, double A_j1,
                                         double mu, double phi0 = 0.0,
                                         int truncation = 40);

// Evolution under the sampled frequency waveforms in the omega_bar frame:
// diagonal omega_j(t) - omega_bar, static couplings g. Envelopes are
// interpolated linearly between samples; the carrier is evaluated exactly.
EvolutionResult simulate_lab_frame(const ChainSpec& chain,
                                   const PulseProgram& program, double g,
                                   int init_site,
                                   const StepperConfig& stepper = {});

struct FrameComparison {
  double max_com_diff = 0.0;  // sites
  double max_pop_diff = 0.0;  // L-infinity over sites and times
};
FrameComparison compare_frames(const EvolutionResult& lab,
                               const EvolutionResult& target,
                               int n_probe = 257);

struct FloquetCheckResult {
  AmplitudeSolution amplitudes;
  PulseProgram program;
  NyquistReport nyquist;
  AdiabaticReport adiabatic;
  EvolutionResult lab;
  EvolutionResult target;
  FrameComparison comparison;
};

// Full pipeline for one cycle: synthesize waveforms for the trajectory (with
// disorder offsets), evolve lab and target frames from init_site, compare.
FloquetCheckResult run_floquet_check(const ChainSpec& chain,
                                     const Trajectory& traj,
                                     const DisorderRealization& dis, double g,
                                     const ModulationSpec& spec, int init_site,
                                     double sample_rate = 0.0,
                                     const StepperConfig& stepper = {});

// omega [MHz] <-> Z-pulse amplitude [V] on the monotone flux branch.
double frequency_from_zpa(const TransmonCalib& calib, double v);
double zpa_from_frequency(const TransmonCalib& calib, double omega_mhz);

// Columnar text: time, per-qubit frequency, per-qubit Zpa; one header row.
void write_pulse_table(std::ostream& out, const PulseProgram& program,
                       const TransmonCalib& calib);

}  // namespace rml
