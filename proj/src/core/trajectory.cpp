#include "core/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace rml {

void Trajectory::validate() const {
  if (!(period > 0.0) || !std::isfinite(period))
    throw ConfigError("trajectory: period must be positive and finite");
  if (orientation != 1 && orientation != -1)
    throw ConfigError("trajectory: orientation must be +1 or -1");
  for (double v : {Delta0, Delta1, delta0, delta_c, phase0})
    if (!std::isfinite(v)) throw ConfigError("trajectory: non-finite parameter");
  if (kind == TrajectoryKind::DoubleLoop) {
    if (!(tau1 > 0.0) || !(tau2 > 0.0))
      throw ConfigError("trajectory: double loop needs tau1 > 0 and tau2 > 0");
    if (std::abs(tau1 + tau2 - period) > 1e-12 * std::max(1.0, period))
      throw ConfigError("trajectory: double loop period must equal tau1 + tau2");
  }
  if (kind == TrajectoryKind::Table) {
    if (table_t.size() != table_p.size() || table_t.size() < 2)
      throw ConfigError("trajectory: table needs matching time/point lists");
    if (std::abs(table_t.front()) > 1e-12 ||
        std::abs(table_t.back() - period) > 1e-9 * std::max(1.0, period))
      throw ConfigError("trajectory: table must span [0, period]");
    for (std::size_t i = 1; i < table_t.size(); ++i)
      if (!(table_t[i] > table_t[i - 1]))
        throw ConfigError("trajectory: table times must increase strictly");
    if (std::abs(table_p.front().Delta - table_p.back().Delta) > 1e-9 ||
        std::abs(table_p.front().delta - table_p.back().delta) > 1e-9)
      throw ConfigError("trajectory: table path must close on itself");
  }
}

namespace {

ParamPoint sample_double_loop(const Trajectory& tr, double t) {
  const double om1 = kTwoPi / tr.tau1;
  const double om2 = kTwoPi / tr.tau2;
  const double tA = 0.75 * tr.tau1;       // end of the leading outer arc
  const double tB = tA + tr.tau2;         // end of the inner loop
  ParamPoint p;
  if (t <= tA) {
    p.Delta = tr.Delta0 * std::cos(om1 * t);
    p.delta = tr.delta0 * std::sin(om1 * t);
  } else if (t <= tB) {
    p.Delta = -tr.Delta1 * std::sin(om2 * (t - tA));
    p.delta = -tr.delta0 * std::cos(om2 * (t - tA));
  } else {
    p.Delta = tr.Delta0 * std::sin(om1 * (t - tB));
    p.delta = -tr.delta0 * std::cos(om1 * (t - tB));
  }
  return p;
}

}  // namespace

ParamPoint Trajectory::sample(double t) const {
  if (t < 0.0 || !std::isfinite(t))
    throw ConfigError("trajectory: sample time must be finite and >= 0");
  double tw = std::fmod(t, period);
  if (orientation < 0) tw = period - tw;

  switch (kind) {
    case TrajectoryKind::Ellipse: {
      const double phi = kTwoPi * tw / period + phase0;
      return {Delta0 * std::cos(phi), delta0 * std::sin(phi)};
    }
    case TrajectoryKind::HalfEllipse: {
      const double phi = kTwoPi * tw / period + phase0;
      return {Delta0 * std::cos(phi), delta0 * std::abs(std::sin(phi))};
    }
    case TrajectoryKind::BiasedCircle: {
      const double phi = kTwoPi * tw / period + phase0;
      return {Delta0 * std::cos(phi), delta_c + delta0 * std::sin(phi)};
    }
    case TrajectoryKind::DoubleLoop:
      return sample_double_loop(*this, tw);
    case TrajectoryKind::Table: {
      auto it = std::upper_bound(table_t.begin(), table_t.end(), tw);
      std::size_t hi = std::min<std::size_t>(
          static_cast<std::size_t>(it - table_t.begin()), table_t.size() - 1);
      if (hi == 0) hi = 1;
      const std::size_t lo = hi - 1;
      const double span = table_t[hi] - table_t[lo];
      const double w = span > 0.0 ? (tw - table_t[lo]) / span : 0.0;
      return {table_p[lo].Delta + w * (table_p[hi].Delta - table_p[lo].Delta),
              table_p[lo].delta + w * (table_p[hi].delta - table_p[lo].delta)};
    }
  }
  throw NumericError("trajectory: unknown variant");
}

int Trajectory::winding_about(const ParamPoint& about, int n_samples,
                              double tol) const {
  if (n_samples < 16) throw ConfigError("trajectory: winding needs >= 16 samples");
  double total = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= n_samples; ++i) {
    const double t = period * static_cast<double>(i) / n_samples;
    const ParamPoint p = sample(t);
    const double dx = p.Delta - about.Delta;
    const double dy = p.delta - about.delta;
    if (std::hypot(dx, dy) < tol)
      throw NumericError("trajectory: path passes through the winding point");
    const double ang = std::atan2(dy, dx);
    if (i > 0) {
      double step = ang - prev;
      while (step > M_PI) step -= kTwoPi;   // shortest turn between samples
      while (step < -M_PI) step += kTwoPi;
      total += step;
    }
    prev = ang;
  }
  const double turns = total / kTwoPi;
  const double nearest = std::round(turns);
  if (std::abs(turns - nearest) > 1e-3)
    throw NumericError("trajectory: winding did not converge to an integer");
  return static_cast<int>(nearest);
}

Trajectory Trajectory::ellipse(double Delta0, double delta0, double period,
                               int orientation, double phase0) {
  Trajectory tr;
  tr.kind = TrajectoryKind::Ellipse;
  tr.Delta0 = Delta0;
  tr.delta0 = delta0;
  tr.period = period;
  tr.orientation = orientation;
  tr.phase0 = phase0;
  tr.validate();
  return tr;
}

Trajectory Trajectory::half_ellipse(double Delta0, double delta0, double period) {
  Trajectory tr;
  tr.kind = TrajectoryKind::HalfEllipse;
  tr.Delta0 = Delta0;
  tr.delta0 = delta0;
  tr.period = period;
  tr.validate();
  return tr;
}

Trajectory Trajectory::biased_circle(double Delta0, double delta0,
                                     double delta_c, double period) {
  Trajectory tr;
  tr.kind = TrajectoryKind::BiasedCircle;
  tr.Delta0 = Delta0;
  tr.delta0 = delta0;
  tr.delta_c = delta_c;
  tr.period = period;
  tr.validate();
  return tr;
}

Trajectory Trajectory::double_loop(double Delta0, double Delta1, double delta0,
                                   double tau1, double tau2) {
  Trajectory tr;
  tr.kind = TrajectoryKind::DoubleLoop;
  tr.Delta0 = Delta0;
  tr.Delta1 = Delta1;
  tr.delta0 = delta0;
  tr.tau1 = tau1;
  tr.tau2 = tau2;
  tr.period = tau1 + tau2;
  tr.validate();
  return tr;
}

}  // namespace rml
