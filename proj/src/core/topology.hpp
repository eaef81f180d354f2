// Chern number of the driven two-band model on the k-t torus, computed with
// normalized link variables and plaquette phases so gapped cycles give exact
// integers on coarse grids.
#pragma once

#include <vector>

#include "core/trajectory.hpp"
#include "core/types.hpp"

namespace rml {

struct BerryGrid {
  int n_k = 0;
  int n_t = 0;
  // Lower-band eigenvectors, index it * n_k + ik.
  std::vector<Eigen::Vector2cd> states;
  // Plaquette phases in radians, same indexing, each in (-pi, pi].
  std::vector<double> plaquette;
  // Sum of plaquette phases / 2pi, before orientation fixing.
  double raw_total = 0.0;
};

// Tabulates lower-band states and plaquette phases over one period. k0 and t0
// shift the grid origin (the invariant must not care); k wraps into the zone.
BerryGrid berry_grid(const Trajectory& traj, double J, int n_k, int n_t,
                     double k0 = 0.0, double t0 = 0.0);

// Signed Chern number of the lower band. Throws ConfigError if the gap closes
// on the torus and NumericError if the plaquette sum is further than 1e-6
// from an integer (refine the grid).
int chern_number(const Trajectory& traj, double J, int n_k = 32, int n_t = 32);

}  // namespace rml
