#include "doctest.h"

#include <cmath>
#include <complex>

#include "core/disorder.hpp"
#include "core/model.hpp"
#include "core/rng.hpp"

using namespace rml;

namespace {

CVec random_state(int L, std::uint64_t seed) {
  SplitMix64 g(seed);
  CVec psi(L);
  for (int i = 0; i < L; ++i)
    psi(i) = complexd(2.0 * g.uniform01() - 1.0, 2.0 * g.uniform01() - 1.0);
  psi /= psi.norm();
  return psi;
}

}  // namespace

TEST_CASE("four-site chain assembles the staggered matrix") {
  ChainSpec chain{4, 2.0, Boundary::Open};
  Mat H = build_single_particle(chain, {10.0, 2.5},
                                DisorderRealization::clean(chain));
  CHECK(H(0, 0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(H(1, 1) == doctest::Approx(-10.0).epsilon(1e-15));
  CHECK(H(2, 2) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(H(3, 3) == doctest::Approx(-10.0).epsilon(1e-15));
  CHECK(H(0, 1) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(H(1, 2) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(H(2, 3) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(H(0, 2) == 0.0);
  CHECK(H(0, 3) == 0.0);
}

TEST_CASE("periodic wrap bond carries the alternating sign") {
  ChainSpec chain{4, 2.0, Boundary::Periodic};
  Mat H = build_single_particle(chain, {10.0, 2.5},
                                DisorderRealization::clean(chain));
  // bond 3 joins sites 3 and 0 and sits on the weak sublattice for even L
  CHECK(H(3, 0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(H(0, 3) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("disorder offsets land on their sites and bonds") {
  ChainSpec chain{6, 2.0, Boundary::Open};
  DisorderRealization dis = DisorderRealization::clean(chain);
  dis.onsite[2] = 0.7;
  dis.hopping[1] = -0.3;
  Mat H = build_single_particle(chain, {1.0, 0.25}, dis);
  CHECK(H(2, 2) == doctest::Approx(1.0 + 0.7).epsilon(1e-15));
  CHECK(H(1, 2) == doctest::Approx(2.0 - (0.25 - 0.3)).epsilon(1e-15));
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bloch matrix reproduces the dispersion at the zone points") {
  const double J = 2.0;
  SUBCASE("zone center, staggered point") {
    Eigen::Matrix2cd h = build_bloch({10.0, 0.0}, J, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    CHECK(es.eigenvalues()(1) ==
          doctest::Approx(std::sqrt(116.0)).epsilon(1e-14));
    CHECK(es.eigenvalues()(0) ==
          doctest::Approx(-std::sqrt(116.0)).epsilon(1e-14));
  }
  SUBCASE("zone edge, dimerized point") {
    const double kd_pi = 3.14159265358979323846 / 2.0;  // k = pi/d with d = 2
    Eigen::Matrix2cd h = build_bloch({0.0, 2.5}, J, kd_pi);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    CHECK(es.eigenvalues()(1) == doctest::Approx(5.0).epsilon(1e-14));
  }
  SUBCASE("zone center, dimerized point") {
    Eigen::Matrix2cd h = build_bloch({0.0, 2.5}, J, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    CHECK(es.eigenvalues()(1) == doctest::Approx(4.0).epsilon(1e-14));
  }
  SUBCASE("hermitian for generic k") {
    Eigen::Matrix2cd h = build_bloch({3.0, 1.0}, J, 0.9);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("k outside the zone is refused") {
    CHECK_THROWS_AS((void)build_bloch({1.0, 0.5}, J, 4.0), ConfigError);
  }
}

TEST_CASE("pair basis enumerates site pairs consistently") {
  const int L = 9;
  int idx = 0;
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      CHECK(pair_basis_index(L, i, j) == idx);
      auto [a, b] = pair_basis_sites(L, idx);
      CHECK(a == i);
      CHECK(b == j);
      ++idx;
    }
  CHECK(idx == L * (L - 1) / 2);
}

TEST_CASE("two-excitation matrix is symmetric with additive diagonal") {
  ChainSpec chain{8, 1.5, Boundary::Open};
  DisorderRealization dis = DisorderRealization::clean(chain);
  dis.onsite[3] = 0.4;
  Mat H2 = build_two_excitation(chain, {2.0, 0.5}, dis);
  Mat H1 = build_single_particle(chain, {2.0, 0.5}, dis);
  const int dim = chain.L * (chain.L - 1) / 2;
  REQUIRE(H2.rows() == dim);
  CHECK((H2 - H2.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  for (int idx = 0; idx < dim; ++idx) {
    auto [i, j] = pair_basis_sites(chain.L, idx);
    CHECK(H2(idx, idx) ==
          doctest::Approx(H1(i, i) + H1(j, j)).epsilon(1e-14));
  }
  // hopping moves exactly one member of the pair to a neighboring site
  const int from = pair_basis_index(chain.L, 2, 5);
  CHECK(H2(from, pair_basis_index(chain.L, 2, 6)) ==
        doctest::Approx(H1(5, 6)).epsilon(1e-14));
  CHECK(H2(from, pair_basis_index(chain.L, 3, 5)) ==
        doctest::Approx(H1(2, 3)).epsilon(1e-14));
  CHECK(H2(from, pair_basis_index(chain.L, 4, 6)) == 0.0);
}

TEST_CASE("pair basis guard refuses oversized chains") {
  ChainSpec chain{66, 1.0, Boundary::Open};
  CHECK_THROWS_AS((void)build_two_excitation(
                      chain, {1.0, 0.0}, DisorderRealization::clean(chain)),
                  ConfigError);
}

TEST_CASE("current operator is hermitian and matches its matrix-free form") {
  ChainSpec chain{10, 2.0, Boundary::Periodic};
  DisorderRealization dis = DisorderRealization::clean(chain);
  dis.hopping[4] = 0.21;
  const ParamPoint p{3.0, 0.8};
  CMat J_op = current_operator(chain, p, dis);
  CHECK((J_op - J_op.adjoint()).cwiseAbs().maxCoeff() <= 1e-15);

  CVec psi = random_state(chain.L, 77);
  const complexd bra = (psi.adjoint() * J_op * psi)(0, 0);
  CHECK(std::abs(bra.imag()) <= 1e-14);
  CHECK(current_expectation(chain, p, dis, psi) ==
        doctest::Approx(bra.real()).epsilon(1e-12));

  // a site-localized state carries no current
  CVec loc = CVec::Zero(chain.L);
  loc(3) = 1.0;
  CHECK(std::abs(current_expectation(chain, p, dis, loc)) <= 1e-15);
}

TEST_CASE("slater current sums the orbital currents") {
  ChainSpec chain{8, 1.0, Boundary::Periodic};
  DisorderRealization dis = DisorderRealization::clean(chain);
  const ParamPoint p{1.0, 0.3};
  CMat orbitals(chain.L, 2);
  orbitals.col(0) = random_state(chain.L, 5);
  orbitals.col(1) = random_state(chain.L, 6);
  // orthonormalize the pair
  orbitals.col(1) -=
      orbitals.col(0) * (orbitals.col(0).adjoint() * orbitals.col(1))(0, 0);
  orbitals.col(1) /= orbitals.col(1).norm();

  const double sum = current_expectation(chain, p, dis, CVec(orbitals.col(0))) +
                     current_expectation(chain, p, dis, CVec(orbitals.col(1)));
  CHECK(current_expectation(chain, p, dis, orbitals) ==
        doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("clean current variant ignores hopping disorder") {
  ChainSpec chain{8, 1.0, Boundary::Periodic};
  DisorderRealization dis = DisorderRealization::clean(chain);
  dis.hopping[2] = 0.9;
  const ParamPoint p{0.5, 0.2};
  CVec psi = random_state(chain.L, 11);
  const double with_w = current_expectation(chain, p, dis, psi, true);
  const double without_w = current_expectation(chain, p, dis, psi, false);
  const double clean = current_expectation(
      chain, p, DisorderRealization::clean(chain), psi, true);
  CHECK(without_w == doctest::Approx(clean).epsilon(1e-14));
  CHECK(with_w != doctest::Approx(without_w).epsilon(1e-6));
}
