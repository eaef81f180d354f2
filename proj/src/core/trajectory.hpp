// Periodic control-plane trajectories (Delta(t), delta(t)) driving the pump.
#pragma once

#include <vector>

#include "core/types.hpp"

namespace rml {

enum class TrajectoryKind {
  Ellipse,      // (Delta0 cos phi, delta0 sin phi), winds about the origin
  HalfEllipse,  // (Delta0 cos phi, delta0 |sin phi|), stays in one half plane
  DoubleLoop,   // partial outer ellipse + full counter-rotating inner loop
  BiasedCircle, // (Delta0 cos phi, delta_c + delta0 sin phi)
  Table,        // user-supplied closed polyline, linear interpolation
};

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Ellipse;

  double Delta0 = 0.0;   // MHz, outer onsite amplitude
  double Delta1 = 0.0;   // MHz, inner onsite amplitude (double loop)
  double delta0 = 0.0;   // MHz, hopping-imbalance amplitude
  double delta_c = 0.0;  // MHz, hopping-imbalance offset (biased circle)
  double period = 0.0;   // us; for the double loop this is tau1 + tau2
  double tau1 = 0.0;     // us, outer sub-period (double loop only)
  double tau2 = 0.0;     // us, inner sub-period (double loop only)
  int orientation = +1;  // -1 traverses the same path time-reversed
  double phase0 = 0.0;   // rad, start-phase offset of the closed forms

  // Table variant: nodes (time_us, point), times strictly increasing from 0
  // to period, first and last point equal.
  std::vector<double> table_t;
  std::vector<ParamPoint> table_p;

  void validate() const;
  ParamPoint sample(double t) const;  // throws ConfigError for t < 0

  // Net signed turns of the sampled path around `about`; throws NumericError
  // if the path passes within `tol` MHz of the point or the turn count does
  // not land on an integer.
  int winding_about(const ParamPoint& about, int n_samples = 4096,
                    double tol = 1e-6) const;

  // Convenience builders for the shapes exercised throughout the tests.
  static Trajectory ellipse(double Delta0, double delta0, double period,
                            int orientation = +1, double phase0 = 0.0);
  static Trajectory half_ellipse(double Delta0, double delta0, double period);
  static Trajectory biased_circle(double Delta0, double delta0, double delta_c,
                                  double period);
  static Trajectory double_loop(double Delta0, double Delta1, double delta0,
                                double tau1, double tau2);
};

}  // namespace rml
