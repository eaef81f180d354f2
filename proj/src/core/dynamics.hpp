// Adiabatic time evolution under the driven chain: midpoint-sampled
// piecewise-constant Hamiltonian with an exact Hermitian exponential per
// step. Covers single-excitation, hard-core two-excitation, and half-filled
// Slater evolutions, plus the pumped charge at half filling.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "core/disorder.hpp"
#include "core/spectral.hpp"
#include "core/trajectory.hpp"
#include "core/types.hpp"

namespace rml {

struct StepperConfig {
  // Raised automatically until dt * f_max <= 0.02 with f_max the largest
  // instantaneous matrix element scale in MHz; never below 64.
  int steps_per_period = 512;
  double norm_tol = 1e-9;
};

// Largest |H_ij| over one period, estimated on n_samples midpoints. The pair
// flag bounds the two-excitation matrix instead (two site terms plus a bond).
double max_matrix_scale(const ChainSpec& chain, const Trajectory& traj,
                        const DisorderRealization& dis, bool pair_basis = false,
                        int n_samples = 512);

// Steps per period after enforcing the resolution invariant.
int resolve_steps(const StepperConfig& stepper, double period, double f_max);

// One exact step exp(-i 2pi H dt), reusable across states.
class StepPropagator {
 public:
  StepPropagator(const Mat& H, double dt);
  void apply(CVec& psi) const;
  void apply(CMat& columns) const;

 private:
  Mat V_;
  CVec phase_;
};

CVec propagate_step(const Mat& H_mid, double dt, const CVec& state);

struct EvolutionResult {
  std::vector<double> times;  // us, every step boundary
  // populations[s] = per-site <n_j> at times[s]; sums to the excitation count
  std::vector<std::vector<double>> populations;
  std::vector<double> com;          // x_bar(t) = sum_j j <n_j>, 1-based sites
  std::vector<double> cycle_shift;  // x_bar(mT) - x_bar((m-1)T)
  CVec final_state;
  bool edge_contaminated = false;  // open chains: outermost population > 0.01
  double max_norm_drift = 0.0;
};

// init_site is 1-based, matching the device convention.
EvolutionResult evolve_single_excitation(const ChainSpec& chain,
                                         const Trajectory& traj,
                                         const DisorderRealization& dis,
                                         int init_site, int n_cycles,
                                         const StepperConfig& stepper = {});

// Hard-core pair dynamics in the two-excitation basis; init sites 1-based.
EvolutionResult evolve_two_excitations(const ChainSpec& chain,
                                       const Trajectory& traj,
                                       const DisorderRealization& dis,
                                       std::pair<int, int> init_pair,
                                       int n_cycles,
                                       const StepperConfig& stepper = {});

struct SlaterState {
  CMat orbitals;  // L x N, orthonormal columns
  double orthonormality_error() const;
};

struct HalfFillingResult {
  std::vector<double> times;
  std::vector<double> com;      // CoM of the total density, 1-based sites
  std::vector<double> current;  // <J(t)> on the step grid, cyclic units
  SlaterState initial;
  SlaterState final;
  double pumped_charge = 0.0;      // Delta Q in units of d
  double subspace_fidelity = 0.0;  // |det(Phi_0^dag Phi_T)|
  double max_norm_drift = 0.0;     // worst column-orthonormality error seen
};

// Fills the lowest N = L/2 orbitals at t = 0 and drives them through
// n_cycles periods. Periodic boundary and even L required; refuses when the
// Fermi level is degenerate at t = 0.
HalfFillingResult evolve_half_filling(const ChainSpec& chain,
                                      const Trajectory& traj,
                                      const DisorderRealization& dis,
                                      int n_cycles = 1,
                                      const StepperConfig& stepper = {});

// Charge pumped through one cycle at half filling, in units of d:
// 2pi * trapezoid of the current series. period_override > 0 rescales the
// trajectory period for this run.
double pumped_charge(const ChainSpec& chain, const Trajectory& traj,
                     const DisorderRealization& dis, double period_override = 0,
                     const StepperConfig& stepper = {});

// Shared integrator for externally supplied Hamiltonians (used by the
// modulated lab-frame check): H_mid(t) must return the instantaneous matrix.
EvolutionResult evolve_custom(const std::function<Mat(double)>& H_mid, int L,
                              const CVec& psi0, double duration,
                              int total_steps, int steps_per_cycle,
                              bool track_edges, double norm_tol = 1e-9);

}  // namespace rml
