#include "core/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "core/model.hpp"

namespace rml {

double max_matrix_scale(const ChainSpec& chain, const Trajectory& traj,
                        const DisorderRealization& dis, bool pair_basis,
                        int n_samples) {
  chain.validate();
  dis.validate(chain);
  if (n_samples < 16) throw ConfigError("stepper: need at least 16 scale samples");
  double scale = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double t = traj.period * (s + 0.5) / n_samples;
    const ParamPoint p = traj.sample(t);
    double site = 0.0;
    for (int i = 0; i < chain.L; ++i)
      site = std::max(site, std::abs(stagger_site(i) * p.Delta + dis.onsite[static_cast<std::size_t>(i)]));
    double bond = 0.0;
    for (int b = 0; b < chain.bonds(); ++b)
      bond = std::max(bond, std::abs(chain.J + stagger_bond(b) * (p.delta + dis.hopping[static_cast<std::size_t>(b)])));
    scale = std::max(scale, pair_basis ? 2.0 * site + bond : std::max(site, bond));
  }
  return scale;
}

int resolve_steps(const StepperConfig& stepper, double period, double f_max) {
  if (period <= 0.0) throw ConfigError("stepper: period must be positive");
  int n = std::max(stepper.steps_per_period, 64);
  const double required = std::ceil(period * f_max / 0.02);
  if (required > 1e9) throw ConfigError("stepper: resolution requirement out of range");
  n = std::max(n, static_cast<int>(required));
  return n;
}

StepPropagator::StepPropagator(const Mat& H, double dt) {
  if (dt <= 0.0) throw ConfigError("stepper: dt must be positive");
  EigenSystem es = eigh(H);
  V_ = std::move(es.vectors);
  phase_.resize(es.values.size());
  for (int i = 0; i < es.values.size(); ++i)
    phase_(i) = std::polar(1.0, -kTwoPi * es.values(i) * dt);
}

void StepPropagator::apply(CVec& psi) const {
  const Vec a = V_.transpose() * psi.real();
  const Vec b = V_.transpose() * psi.imag();
  CVec y = (a.cast<complexd>() + complexd(0, 1) * b.cast<complexd>()).cwiseProduct(phase_);
  const Vec yr = y.real();
  const Vec yi = y.imag();
  psi.real() = V_ * yr;
  psi.imag() = V_ * yi;
}

void StepPropagator::apply(CMat& columns) const {
  const Mat a = V_.transpose() * columns.real();
  const Mat b = V_.transpose() * columns.imag();
  CMat y = a.cast<complexd>() + complexd(0, 1) * b.cast<complexd>();
  y.array().colwise() *= phase_.array();
  const Mat yr = y.real();
  const Mat yi = y.imag();
  columns.real() = V_ * yr;
  columns.imag() = V_ * yi;
}

CVec propagate_step(const Mat& H_mid, double dt, const CVec& state) {
  CVec psi = state;
  StepPropagator(H_mid, dt).apply(psi);
  return psi;
}

EvolutionResult evolve_custom(const std::function<Mat(double)>& H_mid, int L,
                              const CVec& psi0, double duration,
                              int total_steps, int steps_per_cycle,
                              bool track_edges, double norm_tol) {
  if (total_steps < 1) throw ConfigError("evolve: need at least one step");
  if (psi0.size() != L) throw ConfigError("evolve: state size mismatch");
  const double dt = duration / total_steps;

  EvolutionResult res;
  res.times.reserve(static_cast<std::size_t>(total_steps) + 1);
  res.populations.reserve(static_cast<std::size_t>(total_steps) + 1);
  res.com.reserve(static_cast<std::size_t>(total_steps) + 1);

  CVec psi = psi0;
  auto record = [&](double t) {
    std::vector<double> pop(static_cast<std::size_t>(L));
    double com = 0.0;
    for (int j = 0; j < L; ++j) {
      pop[static_cast<std::size_t>(j)] = std::norm(psi(j));
      com += (j + 1) * pop[static_cast<std::size_t>(j)];
    }
    if (track_edges &&
        (pop.front() > 0.01 || pop.back() > 0.01))
      res.edge_contaminated = true;
    res.times.push_back(t);
    res.populations.push_back(std::move(pop));
    res.com.push_back(com);
  };
  record(0.0);

  for (int s = 0; s < total_steps; ++s) {
    const double t_mid = (s + 0.5) * dt;
    StepPropagator prop(H_mid(t_mid), dt);
    prop.apply(psi);
    res.max_norm_drift =
        std::max(res.max_norm_drift, std::abs(psi.norm() - 1.0));
    record((s + 1) * dt);
  }
  if (res.max_norm_drift > norm_tol)
    throw NumericError("evolve: norm drift exceeded tolerance");

  if (steps_per_cycle > 0) {
    for (int m = steps_per_cycle; m <= total_steps; m += steps_per_cycle)
      res.cycle_shift.push_back(res.com[static_cast<std::size_t>(m)] -
                                res.com[static_cast<std::size_t>(m - steps_per_cycle)]);
  }
  res.final_state = std::move(psi);
  return res;
}

EvolutionResult evolve_single_excitation(const ChainSpec& chain,
                                         const Trajectory& traj,
                                         const DisorderRealization& dis,
                                         int init_site, int n_cycles,
                                         const StepperConfig& stepper) {
  chain.validate();
  traj.validate();
  dis.validate(chain);
  if (init_site < 1 || init_site > chain.L)
    throw ConfigError("evolve: initial site out of range (sites are 1-based)");
  if (n_cycles < 1) throw ConfigError("evolve: need at least one cycle");

  const double f_max = max_matrix_scale(chain, traj, dis);
  const int n_steps = resolve_steps(stepper, traj.period, f_max);
  CVec psi0 = CVec::Zero(chain.L);
  psi0(init_site - 1) = 1.0;

  auto H = [&](double t) {
    return build_single_particle(chain, traj.sample(std::fmod(t, traj.period)), dis);
  };
  return evolve_custom(H, chain.L, psi0, n_cycles * traj.period,
                       n_cycles * n_steps, n_steps,
                       chain.boundary == Boundary::Open, stepper.norm_tol);
}

EvolutionResult evolve_two_excitations(const ChainSpec& chain,
                                       const Trajectory& traj,
                                       const DisorderRealization& dis,
                                       std::pair<int, int> init_pair,
                                       int n_cycles,
                                       const StepperConfig& stepper) {
  chain.validate();
  traj.validate();
  dis.validate(chain);
  int lo = std::min(init_pair.first, init_pair.second);
  int hi = std::max(init_pair.first, init_pair.second);
  if (lo < 1 || hi > chain.L || lo == hi)
    throw ConfigError("evolve: initial pair must be two distinct 1-based sites");
  if (n_cycles < 1) throw ConfigError("evolve: need at least one cycle");

  const int L = chain.L;
  const int dim = L * (L - 1) / 2;
  const double f_max = max_matrix_scale(chain, traj, dis, true);
  const int n_steps = resolve_steps(stepper, traj.period, f_max);
  const int total_steps = n_cycles * n_steps;
  const double dt = traj.period / n_steps;

  CVec psi = CVec::Zero(dim);
  psi(pair_basis_index(L, lo - 1, hi - 1)) = 1.0;

  EvolutionResult res;
  auto record = [&](double t) {
    std::vector<double> pop(static_cast<std::size_t>(L), 0.0);
    for (int idx = 0; idx < dim; ++idx) {
      const double w = std::norm(psi(idx));
      const auto [i, j] = pair_basis_sites(L, idx);
      pop[static_cast<std::size_t>(i)] += w;
      pop[static_cast<std::size_t>(j)] += w;
    }
    double com = 0.0;
    for (int j = 0; j < L; ++j) com += (j + 1) * pop[static_cast<std::size_t>(j)];
    if (chain.boundary == Boundary::Open &&
        (pop.front() > 0.01 || pop.back() > 0.01))
      res.edge_contaminated = true;
    res.times.push_back(t);
    res.populations.push_back(std::move(pop));
    res.com.push_back(com);
  };
  record(0.0);

  for (int s = 0; s < total_steps; ++s) {
    const double t_mid = std::fmod((s + 0.5) * dt, traj.period);
    StepPropagator prop(build_two_excitation(chain, traj.sample(t_mid), dis), dt);
    prop.apply(psi);
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(psi.norm() - 1.0));
    record((s + 1) * dt);
  }
  if (res.max_norm_drift > stepper.norm_tol)
    throw NumericError("evolve: norm drift exceeded tolerance");

  for (int m = n_steps; m <= total_steps; m += n_steps)
    res.cycle_shift.push_back(res.com[static_cast<std::size_t>(m)] -
                              res.com[static_cast<std::size_t>(m - n_steps)]);
  res.final_state = std::move(psi);
  return res;
}

double SlaterState::orthonormality_error() const {
  const CMat gram = orbitals.adjoint() * orbitals;
  return (gram - CMat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

namespace {

void reorthonormalize(CMat& phi) {
  Eigen::HouseholderQR<CMat> qr(phi);
  phi = qr.householderQ() * CMat::Identity(phi.rows(), phi.cols());
}

}  // namespace

HalfFillingResult evolve_half_filling(const ChainSpec& chain,
                                      const Trajectory& traj,
                                      const DisorderRealization& dis,
                                      int n_cycles,
                                      const StepperConfig& stepper) {
  chain.validate();
  traj.validate();
  dis.validate(chain);
  if (chain.boundary != Boundary::Periodic || chain.L % 2 != 0)
    throw ConfigError("half filling: needs a periodic chain with even L");
  if (n_cycles < 1) throw ConfigError("half filling: need at least one cycle");

  const int L = chain.L;
  const int N = L / 2;
  const EigenSystem es0 = eigh(build_single_particle(chain, traj.sample(0.0), dis));
  if (es0.values(N) - es0.values(N - 1) < 1e-6)
    throw ConfigError("half filling: Fermi level degenerate at t = 0");

  const double f_max = max_matrix_scale(chain, traj, dis);
  const int n_steps = resolve_steps(stepper, traj.period, f_max);
  const int total_steps = n_cycles * n_steps;
  const double dt = traj.period / n_steps;

  HalfFillingResult res;
  res.initial.orbitals = es0.vectors.leftCols(N).cast<complexd>();
  CMat phi = res.initial.orbitals;

  auto record = [&](double t) {
    double com = 0.0;
    for (int j = 0; j < L; ++j) com += (j + 1) * phi.row(j).squaredNorm();
    res.times.push_back(t);
    res.com.push_back(com);
    res.current.push_back(current_expectation(
        chain, traj.sample(std::fmod(t, traj.period)), dis, phi));
  };
  record(0.0);

  for (int s = 0; s < total_steps; ++s) {
    const double t_mid = std::fmod((s + 0.5) * dt, traj.period);
    StepPropagator prop(build_single_particle(chain, traj.sample(t_mid), dis), dt);
    prop.apply(phi);
    if ((s + 1) % 64 == 0 || s + 1 == total_steps) {
      SlaterState probe{phi};
      const double err = probe.orthonormality_error();
      res.max_norm_drift = std::max(res.max_norm_drift, err);
      if (err > 1e-8) reorthonormalize(phi);
    }
    record((s + 1) * dt);
  }
  if (res.max_norm_drift > stepper.norm_tol)
    throw NumericError("half filling: orthonormality drift exceeded tolerance");

  double integral = 0.0;
  for (std::size_t s = 0; s + 1 < res.current.size(); ++s)
    integral += 0.5 * (res.current[s] + res.current[s + 1]) * dt;
  res.pumped_charge = kTwoPi * integral / n_cycles;

  res.final.orbitals = phi;
  res.subspace_fidelity =
      std::abs((res.initial.orbitals.adjoint() * phi).determinant());
  return res;
}

double pumped_charge(const ChainSpec& chain, const Trajectory& traj,
                     const DisorderRealization& dis, double period_override,
                     const StepperConfig& stepper) {
  Trajectory run = traj;
  if (period_override > 0.0) {
    const double ratio = period_override / run.period;
    if (run.kind == TrajectoryKind::DoubleLoop) {
      run.tau1 *= ratio;
      run.tau2 *= ratio;
    }
    for (double& t : run.table_t) t *= ratio;
    run.period = period_override;
  }
  return evolve_half_filling(chain, run, dis, 1, stepper).pumped_charge;
}

}  // namespace rml
