// Spectral toolbox: dense real-symmetric eigensolves (LAPACK dsyevd on the
// hot path), instantaneous many-body gap scans, inverse participation ratio,
// Wilson-loop polarization, and Wannier construction.
#pragma once

#include <functional>

#include "core/disorder.hpp"
#include "core/trajectory.hpp"
#include "core/types.hpp"

namespace rml {

// One k-loop orientation is shared by delta_polarization and the Chern
// calculation so the two invariants always agree: a counterclockwise
// origin-winding ellipse in the (Delta, delta) plane maps to +1.
inline constexpr int kPumpOrientation = -1;

struct EigenSystem {
  Vec values;   // ascending
  Mat vectors;  // column i pairs with values(i)
};

// Full decomposition of a real symmetric matrix; throws ConfigError if the
// input is not symmetric to 1e-12 (relative).
EigenSystem eigh(const Mat& H);
// Eigenvalues only (ascending).
Vec eigh_values(const Mat& H);

// Hermitian 2x2 decomposition for Bloch work: returns {values asc, vectors}.
struct EigenSystem2 {
  Eigen::Vector2d values;
  Eigen::Matrix2cd vectors;
};
EigenSystem2 eigh2(const Eigen::Matrix2cd& h);

// sum_i |psi_i|^4 for a normalized state; in [1/L, 1].
double ipr(const CVec& psi);

// Gap between the N- and (N+1)-particle ground states of the quadratic model
// at half filling (N = L/2): eps_{N+1}(t), scanned over one period.
struct GapReport {
  double minimum = 0.0;    // MHz
  double t_argmin = 0.0;   // us
  std::vector<double> times;
  std::vector<double> gaps;
};
GapReport min_instantaneous_gap(const ChainSpec& chain, const Trajectory& traj,
                                const DisorderRealization& dis, int n_time = 64);

// Wilson-loop polarization of the lower Bloch band at a control-plane point,
// in sites, principal branch (-d/2, d/2]. Requires a gapped point.
double polarization(const ParamPoint& p, double J, int n_k = 256);

// Accumulated polarization change over one closed trajectory, divided by d.
// The k-loop orientation matches the Chern convention of the topology module,
// so a gapped cycle returns exactly that integer. Throws NumericError when
// consecutive samples jump by d/2 or more (refine n_t).
double delta_polarization(const Trajectory& traj, double J, int n_t = 128,
                          int n_k = 256);

// Wannier state of one band (0 = lower, 1 = upper) built from n_k cells,
// homed at cell `home` (0-based), returned on L = 2 n_k sites. Bloch phases
// are smoothed by parallel transport after pinning the first nonzero
// component of u_k real-positive.
CVec wannier_state(const ParamPoint& p, double J, int band, int home, int n_k);

}  // namespace rml
