#include "core/model.hpp"

#include <cmath>

namespace rml {

namespace {
double bond_amplitude(const ChainSpec& chain, const ParamPoint& p,
                      const DisorderRealization& dis, int b,
                      bool include_disorder) {
  const double w = include_disorder ? dis.hopping[static_cast<std::size_t>(b)] : 0.0;
  return chain.J + stagger_bond(b) * (p.delta + w);
}
}  // namespace

Mat build_single_particle(const ChainSpec& chain, const ParamPoint& p,
                          const DisorderRealization& dis) {
  chain.validate();
  dis.validate(chain);
  const int L = chain.L;
  Mat H = Mat::Zero(L, L);
  for (int i = 0; i < L; ++i)
    H(i, i) = stagger_site(i) * (p.Delta + dis.onsite[static_cast<std::size_t>(i)]);
  for (int b = 0; b < chain.bonds(); ++b) {
    const int a = b;
    const int c = (b + 1) % L;
    const double g = bond_amplitude(chain, p, dis, b, true);
    H(a, c) += g;
    H(c, a) += g;
  }
  return H;
}

Eigen::Matrix2cd build_bloch(const ParamPoint& p, double J, double k) {
  const double d = static_cast<double>(ChainSpec::cell_size);
  if (k < -M_PI / d - 1e-12 || k >= M_PI / d + 1e-12)
    throw ConfigError("bloch: k outside the first Brillouin zone");
  const complexd f =
      (J + p.delta) + (J - p.delta) * std::exp(complexd(0.0, -k * d));
  Eigen::Matrix2cd h;
  h << complexd(p.Delta, 0.0), f, std::conj(f), complexd(-p.Delta, 0.0);
  return h;
}

int pair_basis_index(int L, int i, int j) {
  // lexicographic over pairs i < j
  return i * L - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> pair_basis_sites(int L, int idx) {
  int i = 0;
  int block = L - 1;
  while (idx >= block) {
    idx -= block;
    ++i;
    --block;
  }
  return {i, i + 1 + idx};
}

Mat build_two_excitation(const ChainSpec& chain, const ParamPoint& p,
                         const DisorderRealization& dis) {
  chain.validate();
  dis.validate(chain);
  const int L = chain.L;
  if (L > 64) throw ConfigError("two-excitation: L > 64 exceeds the pair-basis guard");
  const int dim = L * (L - 1) / 2;
  Mat H = Mat::Zero(dim, dim);

  std::vector<double> site(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i)
    site[static_cast<std::size_t>(i)] =
        stagger_site(i) * (p.Delta + dis.onsite[static_cast<std::size_t>(i)]);

  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      H(pair_basis_index(L, i, j), pair_basis_index(L, i, j)) =
          site[static_cast<std::size_t>(i)] + site[static_cast<std::size_t>(j)];

  // One hop along bond (a, c) with a spectator s: couples {s,a} <-> {s,c}.
  for (int b = 0; b < chain.bonds(); ++b) {
    const int a = b;
    const int c = (b + 1) % L;
    const double g = bond_amplitude(chain, p, dis, b, true);
    for (int s = 0; s < L; ++s) {
      if (s == a || s == c) continue;
      const int row = pair_basis_index(L, std::min(s, a), std::max(s, a));
      const int col = pair_basis_index(L, std::min(s, c), std::max(s, c));
      H(row, col) += g;
      H(col, row) += g;
    }
  }
  return H;
}

CMat current_operator(const ChainSpec& chain, const ParamPoint& p,
                      const DisorderRealization& dis, bool include_disorder) {
  chain.validate();
  dis.validate(chain);
  const int L = chain.L;
  CMat J_op = CMat::Zero(L, L);
  const complexd iu(0.0, 1.0);
  for (int b = 0; b < chain.bonds(); ++b) {
    const int a = b;
    const int c = (b + 1) % L;
    const double g = bond_amplitude(chain, p, dis, b, include_disorder);
    J_op(c, a) += iu * g / static_cast<double>(L);
    J_op(a, c) -= iu * g / static_cast<double>(L);
  }
  return J_op;
}

double current_expectation(const ChainSpec& chain, const ParamPoint& p,
                           const DisorderRealization& dis, const CVec& psi,
                           bool include_disorder) {
  const int L = chain.L;
  double total = 0.0;
  for (int b = 0; b < chain.bonds(); ++b) {
    const int a = b;
    const int c = (b + 1) % L;
    const double g = bond_amplitude(chain, p, dis, b, include_disorder);
    // psi_c* (i g / L) psi_a + c.c.
    total += -2.0 * g / L * std::imag(std::conj(psi(c)) * psi(a));
  }
  return total;
}

double current_expectation(const ChainSpec& chain, const ParamPoint& p,
                           const DisorderRealization& dis, const CMat& orbitals,
                           bool include_disorder) {
  const int L = chain.L;
  double total = 0.0;
  for (int b = 0; b < chain.bonds(); ++b) {
    const int a = b;
    const int c = (b + 1) % L;
    const double g = bond_amplitude(chain, p, dis, b, include_disorder);
    const complexd corr = (orbitals.row(c).conjugate() * orbitals.row(a).transpose())(0);
    total += -2.0 * g / L * std::imag(corr);
  }
  return total;
}

}  // namespace rml
