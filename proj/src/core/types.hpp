// Shared value types and error taxonomy for the pump simulator core.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rml {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using complexd = std::complex<double>;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

inline constexpr const char* kVersion = "1.0.0";

// Errors cross the C boundary as status codes; the taxonomy mirrors the CLI
// exit contract (config -> 2, quality -> 3).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QualityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Boundary { Open, Periodic };

// Geometry of the dimerized chain: L sites, uniform base hopping J in MHz
// (all frequencies in this library are cyclic, f = omega/2pi), two-site cell.
struct ChainSpec {
  int L = 2;
  double J = 0.0;
  Boundary boundary = Boundary::Open;

  static constexpr int cell_size = 2;  // lattice constant d, in sites

  int bonds() const { return boundary == Boundary::Open ? L - 1 : L; }
  void validate() const {
    if (L < 2) throw ConfigError("chain: L must be at least 2");
    if (boundary == Boundary::Periodic && L % 2 != 0)
      throw ConfigError("chain: periodic boundary requires even L");
    if (!std::isfinite(J)) throw ConfigError("chain: J must be finite");
  }
};

// Sign of the staggering at 0-based site i (site 1 carries +Delta).
inline int stagger_site(int i) { return (i % 2 == 0) ? +1 : -1; }
// Sign on 0-based bond b joining sites (b, b+1); bond 0 is intracell (+delta).
inline int stagger_bond(int b) { return (b % 2 == 0) ? +1 : -1; }

// A point on the control plane (staggered onsite amplitude, hopping imbalance).
struct ParamPoint {
  double Delta = 0.0;  // MHz
  double delta = 0.0;  // MHz
};

// One drawn disorder pattern. onsite[i] is the V offset added to the staggered
// potential of 0-based site i; hopping[b] is the W offset of 0-based bond b.
struct DisorderRealization {
  std::vector<double> onsite;
  std::vector<double> hopping;
  std::uint64_t seed = 0;
  std::string generator = "none";

  static DisorderRealization clean(const ChainSpec& chain) {
    DisorderRealization r;
    r.onsite.assign(static_cast<std::size_t>(chain.L), 0.0);
    r.hopping.assign(static_cast<std::size_t>(chain.bonds()), 0.0);
    return r;
  }
  void validate(const ChainSpec& chain) const {
    if (static_cast<int>(onsite.size()) != chain.L)
      throw ConfigError("disorder: onsite length does not match chain");
    if (static_cast<int>(hopping.size()) != chain.bonds())
      throw ConfigError("disorder: hopping length does not match chain");
  }
};

}  // namespace rml
