#include "core/spectral.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <vector>

#include "core/model.hpp"

extern "C" {
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a,
             const int* lda, double* w, double* work, const int* lwork,
             int* iwork, const int* liwork, int* info);
void openblas_set_num_threads(int);
}

namespace rml {

namespace {

// The worker pool parallelizes over realizations; BLAS must not also fan out,
// both for determinism and to avoid oversubscription.
void pin_blas_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

void check_symmetric(const Mat& H) {
  if (H.rows() != H.cols()) throw ConfigError("eigh: matrix must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw ConfigError("eigh: matrix is not symmetric");
}

Vec dsyevd_run(Mat& A, bool vectors) {
  pin_blas_threads();
  const int n = static_cast<int>(A.rows());
  Vec w(n);
  const char jobz = vectors ? 'V' : 'N';
  const char uplo = 'L';
  int info = 0;
  int lwork = -1, liwork = -1;
  double work_query = 0.0;
  int iwork_query = 0;
  dsyevd_(&jobz, &uplo, &n, A.data(), &n, w.data(), &work_query, &lwork,
          &iwork_query, &liwork, &info);
  if (info != 0) throw NumericError("eigh: workspace query failed");
  lwork = static_cast<int>(work_query);
  liwork = iwork_query;
  std::vector<double> work(static_cast<std::size_t>(lwork));
  std::vector<int> iwork(static_cast<std::size_t>(liwork));
  dsyevd_(&jobz, &uplo, &n, A.data(), &n, w.data(), work.data(), &lwork,
          iwork.data(), &liwork, &info);
  if (info != 0) throw NumericError("eigh: dsyevd did not converge");
  return w;
}

}  // namespace

EigenSystem eigh(const Mat& H) {
  check_symmetric(H);
  EigenSystem es;
  es.vectors = H;
  es.values = dsyevd_run(es.vectors, true);
  return es;
}

Vec eigh_values(const Mat& H) {
  check_symmetric(H);
  Mat A = H;
  return dsyevd_run(A, false);
}

EigenSystem2 eigh2(const Eigen::Matrix2cd& h) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw ConfigError("eigh2: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es;
  es.computeDirect(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

double ipr(const CVec& psi) {
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-8)
    throw ConfigError("ipr: state must be normalized");
  double sum = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    const double p = std::norm(psi(i));
    sum += p * p;
  }
  return sum;
}

GapReport min_instantaneous_gap(const ChainSpec& chain, const Trajectory& traj,
                                const DisorderRealization& dis, int n_time) {
  chain.validate();
  traj.validate();
  if (n_time < 64) throw ConfigError("gap: n_time must be >= 64");
  const int half = chain.L / 2;
  GapReport rep;
  rep.times.reserve(static_cast<std::size_t>(n_time));
  rep.gaps.reserve(static_cast<std::size_t>(n_time));
  rep.minimum = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_time; ++i) {
    const double t = traj.period * static_cast<double>(i) / n_time;
    const Vec w = eigh_values(build_single_particle(chain, traj.sample(t), dis));
    const double gap = w(half);  // eps_{N+1}, the (N+1)-th ascending level
    rep.times.push_back(t);
    rep.gaps.push_back(gap);
    if (gap < rep.minimum) {
      rep.minimum = gap;
      rep.t_argmin = t;
    }
  }
  return rep;
}

namespace {

constexpr double kGapTolMHz = 1e-3;

Eigen::Vector2cd band_vector(const ParamPoint& p, double J, double k, int band) {
  const EigenSystem2 es = eigh2(build_bloch(p, J, k));
  if (es.values(1) - es.values(0) < kGapTolMHz)
    throw ConfigError("polarization: trajectory passes a gapless point");
  return es.vectors.col(band);
}

// Wilson loop phase of the lower band along ascending k; returns the
// polarization in sites on the principal branch (-d/2, d/2].
double wilson_polarization(const ParamPoint& p, double J, int n_k) {
  if (n_k < 8) throw ConfigError("polarization: n_k must be >= 8");
  const double d = ChainSpec::cell_size;
  std::vector<Eigen::Vector2cd> u;
  u.reserve(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) {
    const double k = -M_PI / d + kTwoPi / d * static_cast<double>(i) / n_k;
    u.push_back(band_vector(p, J, k, 0));
  }
  complexd loop(1.0, 0.0);
  for (int i = 0; i < n_k; ++i) {
    const complexd ov = u[static_cast<std::size_t>(i)]
                            .dot(u[static_cast<std::size_t>((i + 1) % n_k)]);
    if (std::abs(ov) < 1e-12)
      throw NumericError("polarization: vanishing Wilson-loop link");
    loop *= ov / std::abs(ov);
  }
  return -(d / kTwoPi) * std::arg(loop);
}

}  // namespace

double polarization(const ParamPoint& p, double J, int n_k) {
  return wilson_polarization(p, J, n_k);
}

double delta_polarization(const Trajectory& traj, double J, int n_t, int n_k) {
  traj.validate();
  if (n_t < 16) throw ConfigError("delta_polarization: n_t must be >= 16");
  const double d = ChainSpec::cell_size;
  double prev = 0.0;
  double first = 0.0;
  double current = 0.0;
  for (int i = 0; i <= n_t; ++i) {
    const double t = traj.period * static_cast<double>(i) / n_t;
    double P = kPumpOrientation * wilson_polarization(traj.sample(t), J, n_k);
    if (i == 0) {
      first = P;
    } else {
      // nearest-branch continuation
      P += d * std::round((prev - P) / d);
      if (std::abs(P - prev) >= 0.5 * d)
        throw NumericError("delta_polarization: branch step too large, refine n_t");
    }
    prev = P;
    current = P;
  }
  return (current - first) / d;
}

CVec wannier_state(const ParamPoint& p, double J, int band, int home, int n_k) {
  if (band != 0 && band != 1) throw ConfigError("wannier: band must be 0 or 1");
  if (n_k < 8) throw ConfigError("wannier: n_k must be >= 8");
  if (home < 0 || home >= n_k) throw ConfigError("wannier: home cell out of range");
  const double d = ChainSpec::cell_size;

  std::vector<Eigen::Vector2cd> u;
  u.reserve(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) {
    const double k = -M_PI / d + kTwoPi / d * static_cast<double>(i) / n_k;
    u.push_back(band_vector(p, J, k, band));
  }

  // Deterministic start phase: first nonzero component real-positive.
  {
    Eigen::Vector2cd& u0 = u[0];
    const int lead = std::abs(u0(0)) > 1e-9 ? 0 : 1;
    u0 *= std::polar(1.0, -std::arg(u0(lead)));
  }
  // Parallel transport: make each link real-positive...
  for (int i = 1; i < n_k; ++i) {
    const complexd ov = u[static_cast<std::size_t>(i - 1)].dot(u[static_cast<std::size_t>(i)]);
    u[static_cast<std::size_t>(i)] *= std::polar(1.0, -std::arg(ov));
  }
  // ... then spread the closing phase evenly so the gauge is smooth across
  // the zone boundary (the leftover uniform gradient is the Wannier offset).
  const double chi = std::arg(u[static_cast<std::size_t>(n_k - 1)].dot(u[0]));
  for (int i = 0; i < n_k; ++i)
    u[static_cast<std::size_t>(i)] *=
        std::polar(1.0, chi * static_cast<double>(i) / n_k);

  CVec w = CVec::Zero(2 * n_k);
  for (int m = 0; m < n_k; ++m) {
    complexd acc0(0.0, 0.0), acc1(0.0, 0.0);
    for (int i = 0; i < n_k; ++i) {
      const double k = -M_PI / d + kTwoPi / d * static_cast<double>(i) / n_k;
      const complexd phase = std::polar(1.0 / n_k, k * d * (m - home));
      acc0 += phase * u[static_cast<std::size_t>(i)](0);
      acc1 += phase * u[static_cast<std::size_t>(i)](1);
    }
    w(2 * m) = acc0;
    w(2 * m + 1) = acc1;
  }
  return w;
}

}  // namespace rml
