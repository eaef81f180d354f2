#include "core/topology.hpp"

#include <cmath>

#include "core/model.hpp"
#include "core/spectral.hpp"

namespace rml {

namespace {

constexpr double kGapTolMHz = 1e-3;

complexd link(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  const complexd ov = a.dot(b);
  if (std::abs(ov) < 1e-12)
    throw NumericError("chern: vanishing link overlap, refine the grid");
  return ov / std::abs(ov);
}

}  // namespace

BerryGrid berry_grid(const Trajectory& traj, double J, int n_k, int n_t,
                     double k0, double t0) {
  traj.validate();
  if (n_k < 16 || n_t < 16)
    throw ConfigError("chern: grid must be at least 16x16");
  const double d = ChainSpec::cell_size;
  const double zone = kTwoPi / d;

  BerryGrid grid;
  grid.n_k = n_k;
  grid.n_t = n_t;
  grid.states.resize(static_cast<std::size_t>(n_k) * n_t);
  grid.plaquette.resize(static_cast<std::size_t>(n_k) * n_t);

  for (int it = 0; it < n_t; ++it) {
    const double t = t0 + traj.period * static_cast<double>(it) / n_t;
    const ParamPoint p = traj.sample(std::fmod(t, traj.period));
    for (int ik = 0; ik < n_k; ++ik) {
      double k = -M_PI / d + k0 + zone * static_cast<double>(ik) / n_k;
      k -= zone * std::floor((k + M_PI / d) / zone);
      const EigenSystem2 es = eigh2(build_bloch(p, J, k));
      if (es.values(1) - es.values(0) < kGapTolMHz)
        throw ConfigError("chern: gap closes on the k-t torus");
      grid.states[static_cast<std::size_t>(it) * n_k + ik] = es.vectors.col(0);
    }
  }

  auto at = [&](int ik, int it) -> const Eigen::Vector2cd& {
    return grid.states[static_cast<std::size_t>((it + n_t) % n_t) * n_k +
                       (ik + n_k) % n_k];
  };

  double total = 0.0;
  for (int it = 0; it < n_t; ++it) {
    for (int ik = 0; ik < n_k; ++ik) {
      const complexd w = link(at(ik, it), at(ik + 1, it)) *
                         link(at(ik + 1, it), at(ik + 1, it + 1)) *
                         std::conj(link(at(ik, it + 1), at(ik + 1, it + 1))) *
                         std::conj(link(at(ik, it), at(ik, it + 1)));
      const double phase = std::arg(w);
      grid.plaquette[static_cast<std::size_t>(it) * n_k + ik] = phase;
      total += phase;
    }
  }
  grid.raw_total = total / kTwoPi;
  return grid;
}

int chern_number(const Trajectory& traj, double J, int n_k, int n_t) {
  const BerryGrid grid = berry_grid(traj, J, n_k, n_t);
  const double nu = kPumpOrientation * grid.raw_total;
  const double rounded = std::round(nu);
  if (std::abs(nu - rounded) > 1e-6)
    throw NumericError("chern: plaquette sum is not an integer, refine the grid");
  return static_cast<int>(rounded);
}

}  // namespace rml
