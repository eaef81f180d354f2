#include "core/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rml {

namespace {

constexpr double kJ0FirstZero = 2.404825557695773;
constexpr double kJ0FirstExtremum = 3.8317059702075123;  // first zero of J1

double j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }
double j1(double x) {
  const double v = std::cyl_bessel_j(1.0, std::abs(x));
  return x < 0 ? -v : v;
}

}  // namespace

double bessel_j(int n, double x) {
  const int m = n < 0 ? -n : n;
  double v = std::cyl_bessel_j(static_cast<double>(m), std::abs(x));
  if (n < 0 && m % 2 != 0) v = -v;
  if (x < 0 && m % 2 != 0) v = -v;
  return v;
}

double bessel_j0_inverse(double y, bool extended) {
  const double hi = extended ? kJ0FirstExtremum : kJ0FirstZero;
  const double lo_val = j0(hi);
  if (!(y > lo_val && y <= 1.0))
    throw ConfigError("bessel_j0_inverse: value outside the monotone branch");
  if (y == 1.0) return 0.0;

  double a = 0.0, b = hi;       // J0 decreasing: J0(a) > y > J0(b)
  double x = a + (b - a) * 0.5;
  for (int it = 0; it < 200; ++it) {
    const double f = j0(x) - y;
    if (std::abs(f) <= 1e-13) return x;
    if (f > 0)
      a = x;
    else
      b = x;
    const double deriv = -j1(x);
    double next = deriv != 0.0 ? x - f / deriv : a;
    if (!(next > a && next < b)) next = a + (b - a) * 0.5;  // safeguard
    x = next;
  }
  if (std::abs(j0(x) - y) > 1e-12)
    throw NumericError("bessel_j0_inverse: no convergence");
  return x;
}

double effective_coupling(double g, double A_j, double A_j1, double eta_j,
                          double eta_j1, double mu) {
  if (mu <= 0.0) throw ConfigError("effective_coupling: carrier must be positive");
  return g * j0((eta_j * A_j - eta_j1 * A_j1) / mu);
}

void ModulationSpec::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw ConfigError("modulation: carrier must be positive");
  if (!std::isfinite(phi0) || !std::isfinite(omega_bar))
    throw ConfigError("modulation: non-finite parameter");
}

void TransmonCalib::validate() const {
  if (!(e_jj > 0.0) || !(e_c > 0.0))
    throw ConfigError("calib: junction and charging energies must be positive");
  if (slope == 0.0) throw ConfigError("calib: flux slope must be nonzero");
  if (!(eta >= 0.5 && eta <= 1.5))
    throw ConfigError("calib: scale factor out of range [0.5, 1.5]");
}

std::vector<double> sample_grid(double duration, double rate) {
  if (!(duration > 0.0) || !(rate > 0.0))
    throw ConfigError("sample_grid: duration and rate must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(duration * rate)));
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = duration * i / n;
  return t;
}

AmplitudeSolution solve_amplitudes(
    const ChainSpec& chain, const std::function<double(int, double)>& bond_target,
    double g, const std::vector<double>& eta, double mu, int reference,
    const std::vector<double>& times, bool allow_beyond_first_zero) {
  chain.validate();
  if (chain.boundary != Boundary::Open)
    throw ConfigError("synthesis: needs an open chain");
  if (!(g > 0.0)) throw ConfigError("synthesis: coupling must be positive");
  if (!(mu > 0.0)) throw ConfigError("synthesis: carrier must be positive");
  if (static_cast<int>(eta.size()) != chain.L)
    throw ConfigError("synthesis: need one scale factor per qubit");
  for (double e : eta)
    if (!(e >= 0.5 && e <= 1.5))
      throw ConfigError("synthesis: scale factor out of range [0.5, 1.5]");
  if (times.size() < 2) throw ConfigError("synthesis: need at least two samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ConfigError("synthesis: sample times must increase");
  int ref = reference == 0 ? (chain.L + 1) / 2 : reference;
  if (ref < 1 || ref > chain.L)
    throw ConfigError("synthesis: reference qubit out of range");
  ref -= 1;

  const int L = chain.L;
  const int n = static_cast<int>(times.size());
  AmplitudeSolution sol;
  sol.times = times;
  sol.amplitudes = Mat::Zero(L, n);
  sol.branch_signs.assign(static_cast<std::size_t>(chain.bonds()), 0);

  Vec x(n);
  auto bond_arguments = [&](int b) {
    for (int i = 0; i < n; ++i) {
      const double target = bond_target(b, times[static_cast<std::size_t>(i)]);
      const double ratio = allow_beyond_first_zero ? target / g
                                                   : std::abs(target) / g;
      if (ratio == 0.0)
        throw ConfigError("synthesis: bond target vanishes at a sample");
      if (ratio > 1.0 + 1e-12 || !std::isfinite(ratio))
        throw ConfigError("synthesis: bond target exceeds the coupling");
      x(i) = bessel_j0_inverse(std::min(ratio, 1.0), allow_beyond_first_zero);
    }
  };

  // From the known side of bond b, pick the branch sign that keeps the new
  // amplitude smallest, then fill its row.
  auto extend = [&](int b, int from, int to) {
    bond_arguments(b);
    const double eta_from = eta[static_cast<std::size_t>(from)];
    const double eta_to = eta[static_cast<std::size_t>(to)];
    double worst_plus = 0.0, worst_minus = 0.0;
    for (int i = 0; i < n; ++i) {
      const double base = eta_from * sol.amplitudes(from, i);
      worst_plus = std::max(worst_plus, std::abs((base + mu * x(i)) / eta_to));
      worst_minus = std::max(worst_minus, std::abs((base - mu * x(i)) / eta_to));
    }
    const int sign = worst_minus < worst_plus ? -1 : 1;
    sol.branch_signs[static_cast<std::size_t>(b)] = sign;
    for (int i = 0; i < n; ++i)
      sol.amplitudes(to, i) =
          (eta_from * sol.amplitudes(from, i) + sign * mu * x(i)) / eta_to;
  };

  for (int b = ref; b <= L - 2; ++b) extend(b, b, b + 1);
  for (int b = ref - 1; b >= 0; --b) extend(b, b + 1, b);
  return sol;
}

void PulseProgram::validate() const {
  const int L = static_cast<int>(omega.rows());
  const int n = static_cast<int>(omega.cols());
  if (static_cast<int>(times.size()) != n || delta.rows() != L ||
      delta.cols() != n || amplitude.rows() != L || amplitude.cols() != n)
    throw ConfigError("pulse program: inconsistent shapes");
  if (!(mu > 0.0)) throw ConfigError("pulse program: carrier must be positive");
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(omega(j, i) - omega_bar - delta(j, i)) >
          std::abs(amplitude(j, i)) + 1e-9)
        throw NumericError("pulse program: waveform outside its envelope");
}

PulseProgram synthesize_waveforms(const Mat& delta_targets,
                                  const AmplitudeSolution& amps,
                                  const ModulationSpec& spec,
                                  double sample_rate) {
  spec.validate();
  const int L = static_cast<int>(delta_targets.rows());
  const int n = static_cast<int>(amps.times.size());
  if (delta_targets.cols() != n || amps.amplitudes.rows() != L)
    throw ConfigError("synthesis: detuning and amplitude grids disagree");
  if (!(sample_rate >= 20.0 * spec.mu))
    throw ConfigError("synthesis: undersampled, need 20 samples per carrier cycle");
  double max_spacing = 0.0;
  for (int i = 1; i < n; ++i)
    max_spacing = std::max(max_spacing, amps.times[static_cast<std::size_t>(i)] -
                                            amps.times[static_cast<std::size_t>(i - 1)]);
  if (max_spacing > (1.0 + 1e-9) / (20.0 * spec.mu))
    throw ConfigError("synthesis: sample grid undersamples the carrier");

  PulseProgram prog;
  prog.times = amps.times;
  prog.sample_rate = sample_rate;
  prog.mu = spec.mu;
  prog.phi0 = spec.phi0;
  prog.omega_bar = spec.omega_bar;
  prog.delta = delta_targets;
  prog.amplitude = amps.amplitudes;
  prog.omega.resize(L, n);
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < n; ++i)
      prog.omega(j, i) =
          spec.omega_bar + delta_targets(j, i) +
          amps.amplitudes(j, i) *
              std::sin(kTwoPi * spec.mu * amps.times[static_cast<std::size_t>(i)] +
                       spec.phi0);
  prog.validate();
  return prog;
}

NyquistReport check_nyquist(double max_abs_delta, double mu) {
  NyquistReport rep;
  rep.max_delta = max_abs_delta;
  rep.margin = mu - 2.0 * max_abs_delta;
  rep.pass = rep.margin > 0.0;
  return rep;
}

NyquistReport check_nyquist(const Trajectory& traj, double mu) {
  traj.validate();
  double worst = 0.0;
  const int n = 4096;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(traj.sample(traj.period * i / n).Delta));
  return check_nyquist(worst, mu);
}

namespace {

// Smallest harmonic m/T whose cumulative non-DC power reaches 1 - fraction.
double power_cutoff(const std::vector<double>& samples, double period,
                    double fraction) {
  const int n = static_cast<int>(samples.size());
  std::vector<double> power(static_cast<std::size_t>(n / 2) + 1, 0.0);
  double total = 0.0;
  double parseval = 0.0;
  for (double x : samples) parseval += x * x;
  parseval *= n;
  for (int m = 1; m <= n / 2; ++m) {
    complexd c(0.0, 0.0);
    for (int i = 0; i < n; ++i)
      c += samples[static_cast<std::size_t>(i)] *
           std::polar(1.0, -kTwoPi * m * i / n);
    power[static_cast<std::size_t>(m)] = std::norm(c);
    total += std::norm(c);
  }
  // below this fraction of the full power the ripple is summation noise,
  // not schedule content
  if (total <= 1e-16 * std::max(parseval, 1e-300)) return 0.0;
  double cum = 0.0;
  for (int m = 1; m <= n / 2; ++m) {
    cum += power[static_cast<std::size_t>(m)];
    if (cum >= (1.0 - fraction) * total) return m / period;
  }
  return (n / 2) / period;
}

}  // namespace

AdiabaticReport check_adiabatic(const Trajectory& traj, double mu,
                                double cutoff_fraction) {
  traj.validate();
  if (!(mu > 0.0)) throw ConfigError("adiabatic check: carrier must be positive");
  if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0))
    throw ConfigError("adiabatic check: cutoff fraction must be in (0, 1)");
  const int n = 2048;
  std::vector<double> ds(n), Ds(n);
  for (int i = 0; i < n; ++i) {
    const ParamPoint p = traj.sample(traj.period * i / n);
    ds[static_cast<std::size_t>(i)] = p.delta;
    Ds[static_cast<std::size_t>(i)] = p.Delta;
  }
  AdiabaticReport rep;
  rep.delta_cutoff = power_cutoff(ds, traj.period, cutoff_fraction);
  rep.Delta_cutoff = power_cutoff(Ds, traj.period, cutoff_fraction);
  rep.ratio_delta = rep.delta_cutoff / mu;
  rep.ratio_Delta = rep.Delta_cutoff / mu;
  rep.pass = rep.ratio_delta <= 0.05 && rep.ratio_Delta <= 0.05;
  return rep;
}

complexd sideband_coefficient(int s, double A_j, double A_j1, double mu,
                              double phi0) {
  if (!(mu > 0.0)) throw ConfigError("sideband: carrier must be positive");
  return bessel_j(s, (A_j1 - A_j) / mu) *
         std::polar(1.0, s * (phi0 - M_PI / 2.0));
}

complexd sideband_coefficient_double_sum(int s, double A_j, double A_j1,
                                         double mu, double phi0,
                                         int truncation) {
  if (!(mu > 0.0)) throw ConfigError("sideband: carrier must be positive");
  complexd sum(0.0, 0.0);
  for (int m = -truncation; m <= truncation; ++m) {
    const int k = s - m;
    if (k < -truncation || k > truncation) continue;
    sum += bessel_j(m, A_j / mu) * bessel_j(k, -A_j1 / mu);
  }
  // i^(m+k) = i^s for every term of the sum
  return sum * std::polar(1.0, s * (M_PI / 2.0 + phi0));
}

namespace {

double interp_row(const std::vector<double>& times, const Mat& rows, int j,
                  double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return rows(j, 0);
  if (it == times.end()) return rows(j, static_cast<int>(times.size()) - 1);
  const int hi = static_cast<int>(it - times.begin());
  const int lo = hi - 1;
  const double t0 = times[static_cast<std::size_t>(lo)];
  const double t1 = times[static_cast<std::size_t>(hi)];
  const double w = (t - t0) / (t1 - t0);
  return (1.0 - w) * rows(j, lo) + w * rows(j, hi);
}

}  // namespace

EvolutionResult simulate_lab_frame(const ChainSpec& chain,
                                   const PulseProgram& program, double g,
                                   int init_site,
                                   const StepperConfig& stepper) {
  chain.validate();
  program.validate();
  if (static_cast<int>(program.omega.rows()) != chain.L)
    throw ConfigError("lab frame: program row count differs from the chain");
  if (init_site < 1 || init_site > chain.L)
    throw ConfigError("lab frame: initial site out of range (1-based)");
  if (!(g > 0.0)) throw ConfigError("lab frame: coupling must be positive");
  const double duration = program.times.back();
  const int n = static_cast<int>(program.times.size());
  double max_spacing = 0.0;
  for (int i = 1; i < n; ++i)
    max_spacing = std::max(max_spacing,
                           program.times[static_cast<std::size_t>(i)] -
                               program.times[static_cast<std::size_t>(i - 1)]);
  if (max_spacing > (1.0 + 1e-9) / (20.0 * program.mu))
    throw ConfigError("lab frame: program undersamples the carrier");

  double diag = 0.0;
  for (int j = 0; j < chain.L; ++j)
    for (int i = 0; i < n; ++i)
      diag = std::max(diag,
                      std::abs(program.delta(j, i)) + std::abs(program.amplitude(j, i)));
  const double f_max = std::max(diag, g);
  int steps = resolve_steps(stepper, duration, f_max);
  steps = std::max(steps, static_cast<int>(std::ceil(duration * 20.0 * program.mu)));

  auto H = [&](double t) {
    Mat h = Mat::Zero(chain.L, chain.L);
    for (int j = 0; j < chain.L; ++j) {
      const double envelope = interp_row(program.times, program.amplitude, j, t);
      const double slow = interp_row(program.times, program.delta, j, t);
      h(j, j) = slow + envelope * std::sin(kTwoPi * program.mu * t + program.phi0);
    }
    for (int b = 0; b < chain.bonds(); ++b) {
      const int a = b;
      const int c = (b + 1) % chain.L;
      h(a, c) += g;
      h(c, a) += g;
    }
    return h;
  };

  CVec psi0 = CVec::Zero(chain.L);
  psi0(init_site - 1) = 1.0;
  return evolve_custom(H, chain.L, psi0, duration, steps, steps,
                       chain.boundary == Boundary::Open, stepper.norm_tol);
}

namespace {

double interp_series(const std::vector<double>& times,
                     const std::vector<double>& values, double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.front();
  if (it == times.end()) return values.back();
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo] + w * values[hi];
}

double interp_site(const std::vector<double>& times,
                   const std::vector<std::vector<double>>& pops, int j,
                   double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return pops.front()[static_cast<std::size_t>(j)];
  if (it == times.end()) return pops.back()[static_cast<std::size_t>(j)];
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * pops[lo][static_cast<std::size_t>(j)] +
         w * pops[hi][static_cast<std::size_t>(j)];
}

}  // namespace

FrameComparison compare_frames(const EvolutionResult& lab,
                               const EvolutionResult& target, int n_probe) {
  if (lab.times.empty() || target.times.empty())
    throw ConfigError("frame comparison: empty evolution");
  if (lab.populations.front().size() != target.populations.front().size())
    throw ConfigError("frame comparison: chain sizes differ");
  const double span = std::min(lab.times.back(), target.times.back());
  const int L = static_cast<int>(lab.populations.front().size());
  FrameComparison cmp;
  for (int i = 0; i < n_probe; ++i) {
    const double t = span * i / (n_probe - 1);
    cmp.max_com_diff =
        std::max(cmp.max_com_diff, std::abs(interp_series(lab.times, lab.com, t) -
                                            interp_series(target.times, target.com, t)));
    for (int j = 0; j < L; ++j)
      cmp.max_pop_diff = std::max(
          cmp.max_pop_diff, std::abs(interp_site(lab.times, lab.populations, j, t) -
                                     interp_site(target.times, target.populations, j, t)));
  }
  return cmp;
}

FloquetCheckResult run_floquet_check(const ChainSpec& chain,
                                     const Trajectory& traj,
                                     const DisorderRealization& dis, double g,
                                     const ModulationSpec& spec, int init_site,
                                     double sample_rate,
                                     const StepperConfig& stepper) {
  chain.validate();
  traj.validate();
  dis.validate(chain);
  spec.validate();
  const double rate = sample_rate > 0.0 ? sample_rate : 20.0 * spec.mu;

  FloquetCheckResult res;
  const std::vector<double> times = sample_grid(traj.period, rate);
  const std::vector<double> eta(static_cast<std::size_t>(chain.L), 1.0);

  auto bond = [&](int b, double t) {
    return chain.J + stagger_bond(b) * (traj.sample(t).delta +
                                        dis.hopping[static_cast<std::size_t>(b)]);
  };
  // the extended branch keeps bond signs faithful where targets cross zero;
  // for all-positive targets it coincides with the principal branch
  res.amplitudes = solve_amplitudes(chain, bond, g, eta, spec.mu,
                                    spec.reference, times, true);

  Mat delta_targets(chain.L, static_cast<int>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ParamPoint p = traj.sample(times[i]);
    for (int j = 0; j < chain.L; ++j)
      delta_targets(j, static_cast<int>(i)) =
          stagger_site(j) * p.Delta + dis.onsite[static_cast<std::size_t>(j)];
  }
  res.program = synthesize_waveforms(delta_targets, res.amplitudes, spec, rate);
  res.nyquist = check_nyquist(delta_targets.cwiseAbs().maxCoeff(), spec.mu);
  res.adiabatic = check_adiabatic(traj, spec.mu);
  res.lab = simulate_lab_frame(chain, res.program, g, init_site, stepper);
  res.target = evolve_single_excitation(chain, traj, dis, init_site, 1, stepper);
  res.comparison = compare_frames(res.lab, res.target);
  return res;
}

double frequency_from_zpa(const TransmonCalib& calib, double v) {
  calib.validate();
  const double phi = calib.slope * v + calib.offset;
  const double ghz = std::sqrt(8.0 * calib.e_jj * calib.e_c * std::abs(std::cos(phi))) -
                     calib.e_c;
  return 1000.0 * ghz;
}

double zpa_from_frequency(const TransmonCalib& calib, double omega_mhz) {
  calib.validate();
  const double ghz = omega_mhz / 1000.0;
  const double c = (ghz + calib.e_c) * (ghz + calib.e_c) /
                   (8.0 * calib.e_jj * calib.e_c);
  if (c > 1.0 + 1e-12 || ghz < 0.0)
    throw ConfigError("zpa: frequency outside the transducible range");
  return (std::acos(std::min(c, 1.0)) - calib.offset) / calib.slope;
}

void write_pulse_table(std::ostream& out, const PulseProgram& program,
                       const TransmonCalib& calib) {
  program.validate();
  const int L = static_cast<int>(program.omega.rows());
  out << "t_us";
  for (int j = 1; j <= L; ++j) out << ",omega_q" << j << "_MHz";
  for (int j = 1; j <= L; ++j) out << ",zpa_q" << j << "_V";
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < program.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", program.times[i]);
    out << buf;
    for (int j = 0; j < L; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", program.omega(j, static_cast<int>(i)));
      out << ',' << buf;
    }
    for (int j = 0; j < L; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g",
                    zpa_from_frequency(calib, program.omega(j, static_cast<int>(i))));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace rml
