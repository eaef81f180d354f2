// Disorder ensembles: uniform onsite, uniform hopping, and quasi-periodic
// intracell-bond modulation. Realization i of a config is a pure function of
// (config, chain, i) through the substream seed, so ensembles are reproducible
// regardless of evaluation order.
#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace rml {

enum class DisorderKind {
  None,
  OnsiteUniform,           // V_i ~ U[-strength, strength] on every site
  HoppingUniform,          // W_b ~ U[-strength, strength] on every bond
  QuasiPeriodicIntracell,  // W_{2k} = strength * cos(2 pi alpha k + beta)
};

struct DisorderConfig {
  DisorderKind kind = DisorderKind::None;
  double strength = 0.0;  // MHz; V, W, or the cosine amplitude
  double alpha = 0.61803398874989484820458683436564;  // (sqrt(5)-1)/2
  bool beta_random = true;  // quasi-periodic phase: drawn per realization ...
  double beta = 0.0;        // ... or this fixed value
  std::uint64_t master_seed = 0;

  void validate() const;
};

DisorderRealization realize(const DisorderConfig& cfg, const ChainSpec& chain,
                            std::uint64_t index);

}  // namespace rml
