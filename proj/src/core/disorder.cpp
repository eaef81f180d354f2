#include "core/disorder.hpp"

#include <cmath>

#include "core/rng.hpp"

namespace rml {

void DisorderConfig::validate() const {
  if (!(strength >= 0.0) || !std::isfinite(strength))
    throw ConfigError("disorder.strength must be >= 0 and finite");
  if (kind == DisorderKind::QuasiPeriodicIntracell) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
      throw ConfigError("disorder.alpha must be positive");
    if (!std::isfinite(beta)) throw ConfigError("disorder.beta must be finite");
  }
}

DisorderRealization realize(const DisorderConfig& cfg, const ChainSpec& chain,
                            std::uint64_t index) {
  cfg.validate();
  chain.validate();
  DisorderRealization r = DisorderRealization::clean(chain);
  r.seed = substream_seed(cfg.master_seed, index);
  SplitMix64 gen(r.seed);

  switch (cfg.kind) {
    case DisorderKind::None:
      break;
    case DisorderKind::OnsiteUniform:
      r.generator = "onsite-uniform";
      for (double& v : r.onsite) v = gen.uniform_sym(cfg.strength);
      break;
    case DisorderKind::HoppingUniform:
      r.generator = "hopping-uniform";
      for (double& w : r.hopping) w = gen.uniform_sym(cfg.strength);
      break;
    case DisorderKind::QuasiPeriodicIntracell: {
      r.generator = "quasiperiodic-intracell";
      const double beta = cfg.beta_random ? gen.uniform_sym(M_PI) : cfg.beta;
      // Intracell bonds are the even 0-based ones; index them by k.
      for (int b = 0, k = 0; b < chain.bonds(); b += 2, ++k)
        r.hopping[static_cast<std::size_t>(b)] =
            cfg.strength * std::cos(kTwoPi * cfg.alpha * k + beta);
      break;
    }
  }
  return r;
}

}  // namespace rml
