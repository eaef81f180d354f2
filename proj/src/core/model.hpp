// Hamiltonian and current-operator builders for the driven dimerized chain.
//
// Single-particle Hamiltonian on L sites (0-based site i, 1-based site i+1):
//   H(i, i)     = s_i (Delta + V_i),           s_i = +1 on even i
//   H(b, b+1)   = J + s_b (delta + W_b),       s_b = +1 on even bonds
// with the wrap bond (L-1, 0) present for periodic chains. All couplings are
// real, so every chain Hamiltonian here is real symmetric.
#pragma once

#include <utility>

#include "core/types.hpp"

namespace rml {

Mat build_single_particle(const ChainSpec& chain, const ParamPoint& p,
                          const DisorderRealization& dis);

// Bloch Hamiltonian of the clean two-band model at crystal momentum k
// (k in [-pi/d, pi/d)):
//   h(k) = [[Delta, f(k)], [conj(f(k)), -Delta]],
//   f(k) = (J + delta) + (J - delta) e^{-i k d}.
Eigen::Matrix2cd build_bloch(const ParamPoint& p, double J, double k);

// Hard-core pair sector: basis of site pairs (i < j), dimension L(L-1)/2.
// Guarded to L <= 64.
Mat build_two_excitation(const ChainSpec& chain, const ParamPoint& p,
                         const DisorderRealization& dis);
int pair_basis_index(int L, int i, int j);
std::pair<int, int> pair_basis_sites(int L, int idx);

// Bond-resolved current density J_op = (i/L) sum_b g_b |b+1><b| + h.c., built
// from the instantaneous bond amplitudes g_b (disordered by default; the
// clean variant drops W). Entries carry cyclic units (MHz); time integration
// against us multiplies by 2pi.
CMat current_operator(const ChainSpec& chain, const ParamPoint& p,
                      const DisorderRealization& dis,
                      bool include_disorder = true);

// <psi| J_op |psi> evaluated without forming the matrix.
double current_expectation(const ChainSpec& chain, const ParamPoint& p,
                           const DisorderRealization& dis, const CVec& psi,
                           bool include_disorder = true);
// Same for a Slater determinant with orthonormal orbital columns.
double current_expectation(const ChainSpec& chain, const ParamPoint& p,
                           const DisorderRealization& dis, const CMat& orbitals,
                           bool include_disorder = true);

}  // namespace rml
