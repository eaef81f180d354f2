#include "doctest.h"

#include <cmath>

#include "core/model.hpp"
#include "core/rng.hpp"
#include "core/spectral.hpp"

using namespace rml;

namespace {

Mat random_symmetric(int n, std::uint64_t seed) {
  SplitMix64 g(seed);
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 2.0 * g.uniform01() - 1.0;
  return Mat(0.5 * (A + A.transpose()));
}

// Exact one-cycle gap minimum: the band edge sits at the zone center or the
// zone boundary, whichever of sqrt(Delta^2 + 4 J^2) and sqrt(Delta^2 +
// 4 delta^2) is smaller at each instant.
double closed_form_min_gap(const Trajectory& traj, double J, int n_time) {
  double best = 1e300;
  for (int i = 0; i <= n_time; ++i) {
    const ParamPoint p = traj.sample(traj.period * i / n_time);
    const double edge = std::sqrt(p.Delta * p.Delta + 4.0 * p.delta * p.delta);
    const double center = std::sqrt(p.Delta * p.Delta + 4.0 * J * J);
    best = std::min(best, std::min(edge, center));
  }
  return best;
}

}  // namespace

TEST_CASE("dense eigensolver matches eigen's on random symmetric matrices") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Mat A = random_symmetric(24, seed);
    EigenSystem sys = eigh(A);
    Eigen::SelfAdjointEigenSolver<Mat> ref(A);
    CHECK((sys.values - ref.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12);
    // eigenvectors reconstruct the matrix
    Mat rec = sys.vectors * sys.values.asDiagonal() * sys.vectors.transpose();
    CHECK((rec - A).cwiseAbs().maxCoeff() <= 1e-12);
    // values-only path agrees
    Vec w = eigh_values(A);
    CHECK((w - sys.values).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("eigensolver rejects an asymmetric matrix") {
  Mat A = random_symmetric(6, 9);
  A(0, 5) += 1e-6;
  CHECK_THROWS_AS((void)eigh(A), ConfigError);
}

TEST_CASE("two-level solver returns ordered pairs") {
  Eigen::Matrix2cd h;
  h << 3.0, complexd(1.0, -2.0), complexd(1.0, 2.0), -3.0;
  EigenSystem2 sys = eigh2(h);
  const double r = std::sqrt(9.0 + 5.0);
  CHECK(sys.values(0) == doctest::Approx(-r).epsilon(1e-14));
  CHECK(sys.values(1) == doctest::Approx(r).epsilon(1e-14));
  // residual of each eigenpair
  for (int b = 0; b < 2; ++b) {
    Eigen::Vector2cd res = h * sys.vectors.col(b) - sys.values(b) * sys.vectors.col(b);
    CHECK(res.norm() <= 1e-13);
  }
}

TEST_CASE("ipr spans its extremes") {
  const int L = 25;
  CVec loc = CVec::Zero(L);
  loc(7) = 1.0;
  CHECK(ipr(loc) == doctest::Approx(1.0).epsilon(1e-14));
  CVec flat = CVec::Constant(L, complexd(1.0 / std::sqrt(double(L)), 0.0));
  CHECK(ipr(flat) == doctest::Approx(1.0 / L).epsilon(1e-13));
  SplitMix64 g(3);
  CVec r(L);
  for (int i = 0; i < L; ++i)
    r(i) = complexd(g.uniform01() - 0.5, g.uniform01() - 0.5);
  r /= r.norm();
  const double val = ipr(r);
  CHECK(val >= 1.0 / L);
  CHECK(val <= 1.0);
}

TEST_CASE("minimum gap follows the two-branch closed form") {
  ChainSpec chain{800, 2.0, Boundary::Periodic};
  Trajectory traj = Trajectory::ellipse(10.0, 2.5, 8.0);
  GapReport rep = min_instantaneous_gap(chain, traj,
                                        DisorderRealization::clean(chain), 64);
  const double expect = closed_form_min_gap(traj, chain.J, 64);
  CHECK(rep.minimum == doctest::Approx(expect).epsilon(1e-9));
  CHECK(rep.minimum == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(rep.t_argmin == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.gaps.size() == rep.times.size());
}

TEST_CASE("reported gap is the cost of the first level above half filling") {
  ChainSpec chain{40, 2.0, Boundary::Periodic};
  Trajectory traj = Trajectory::ellipse(10.0, 2.5, 8.0);
  const DisorderRealization dis = DisorderRealization::clean(chain);
  GapReport rep = min_instantaneous_gap(chain, traj, dis, 64);
  CHECK(rep.minimum >= 0.0);
  double series_min = rep.gaps.front();
  for (double g : rep.gaps) series_min = std::min(series_min, g);
  CHECK(rep.minimum == series_min);

  const Vec w = eigh_values(
      build_single_particle(chain, traj.sample(rep.t_argmin), dis));
  CHECK(rep.minimum == doctest::Approx(w(20)).epsilon(1e-12));
  // the clean staggered chain has a symmetric spectrum, so this equals
  // half the spacing between the last filled and first empty level
  CHECK(w(20) == doctest::Approx(-w(19)).epsilon(1e-9));
}

TEST_CASE("gap scan needs a sane time resolution") {
  ChainSpec chain{10, 2.0, Boundary::Periodic};
  Trajectory traj = Trajectory::ellipse(10.0, 2.5, 8.0);
  CHECK_THROWS_AS((void)min_instantaneous_gap(
                      chain, traj, DisorderRealization::clean(chain), 8),
                  ConfigError);
}

TEST_CASE("polarization sits at the wannier center") {
  // Several gapped points, including one with a large offset; the band's
  // center of mass equals home d + (odd-sublattice weight) + P.
  struct Point {
    double Delta, delta;
  };
  const double J = 2.0;
  const int n_k = 128;
  for (Point pt : {Point{10.0, 0.0}, Point{0.0, 2.5}, Point{3.0, -1.0},
                   Point{0.5, -1.5}}) {
    const ParamPoint p{pt.Delta, pt.delta};
    const double P = polarization(p, J, n_k);
    CHECK(std::abs(P) <= 1.0);  // principal branch, |P| <= d/2

    const int home = 12;
    CVec w = wannier_state(p, J, 0, home, n_k);
    REQUIRE(w.size() == 2 * n_k);
    double com = 0.0, norm = 0.0, odd = 0.0;
    for (int i = 0; i < w.size(); ++i) {
      const double w2 = std::norm(w(i));
      com += i * w2;
      norm += w2;
      odd += (i % 2) * w2;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(com == doctest::Approx(2.0 * home + odd + P).epsilon(1e-4));
  }
}

TEST_CASE("wannier state localizes around its home cell") {
  const ParamPoint p{10.0, 0.0};
  CVec w = wannier_state(p, 2.0, 0, 20, 96);
  double far = 0.0;
  for (int i = 0; i < w.size(); ++i)
    if (std::abs(i / 2 - 20) > 8) far += std::norm(w(i));
  CHECK(far <= 1e-6);
}

TEST_CASE("polarization drift counts the pump winding") {
  CHECK(delta_polarization(Trajectory::ellipse(10, 2.5, 8), 2.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(delta_polarization(Trajectory::ellipse(10, 2.5, 8, -1), 2.0) ==
        doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(delta_polarization(Trajectory::biased_circle(5.0, 1.0, 1.2, 200), 1.8) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK(delta_polarization(Trajectory::half_ellipse(10, -2.5, 8), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("gapless drive is refused by the polarization scan") {
  // Delta0 cos alone passes through the origin, closing the gap
  Trajectory line = Trajectory::ellipse(10.0, 0.0, 8.0);
  CHECK_THROWS_AS((void)delta_polarization(line, 2.0), ConfigError);
}
