#pragma once

// Truncated Fock-space numerics: density matrices with truncation metadata, Kraus sets for the
// quantum-limited loss and (contra-)amplifier channels, the two-mode-squeezer dilation, and the
// entropy / spectrum / distance utilities used by the verification harness.
//
// Two-mode states use the index n1 * dim + n2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bcl/channel.hpp"
#include "bcl/errors.hpp"

namespace bcl {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseCMatrix = Eigen::SparseMatrix<Complex>;

/// Eigenvalues below this are treated as exact zeros in entropies and spectra.
inline constexpr double kEigenvalueClamp = 1e-14;
/// States whose highest Fock level holds more than this population deserve a warning.
inline constexpr double kTailWarningThreshold = 1e-3;
inline constexpr double kHermitianTolerance = 1e-12;

/// Truncated density matrix over `modes` modes, each cut at `dim` Fock levels.
class FockDensity {
 public:
  FockDensity(int modes, int dim, CMatrix matrix) : modes_(modes), dim_(dim), matrix_(std::move(matrix)) {
    if (modes < 1 || modes > 2 || dim < 1) throw InvalidParameter("FockDensity: unsupported shape");
    const Eigen::Index n = total_dim();
    if (matrix_.rows() != n || matrix_.cols() != n) {
      throw DimensionMismatch("FockDensity: matrix size does not match dim^modes");
    }
    refresh_metadata();
  }

  /// |psi><psi| for a state vector of length dim^modes (not renormalized).
  static FockDensity pure(const CVector& psi, int modes = 1) {
    const int dim = modes == 1 ? static_cast<int>(psi.size())
                               : static_cast<int>(std::lround(std::sqrt(static_cast<double>(psi.size()))));
    FockDensity rho(modes, dim, psi * psi.adjoint());
    rho.vector_ = psi;
    return rho;
  }

  int modes() const { return modes_; }
  int dim() const { return dim_; }
  Eigen::Index total_dim() const { return modes_ == 1 ? dim_ : static_cast<Eigen::Index>(dim_) * dim_; }
  const CMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }
  /// |1 - Tr rho|.
  double trace_defect() const { return trace_defect_; }
  /// Largest population held by the highest Fock level of any single mode.
  double tail_population() const { return tail_population_; }
  bool needs_truncation_warning() const { return tail_population_ > kTailWarningThreshold; }
  /// State vector when the density was built from one.
  const std::optional<CVector>& vector() const { return vector_; }

 private:
  void refresh_metadata() {
    trace_defect_ = std::abs(1.0 - trace());
    tail_population_ = 0.0;
    if (modes_ == 1) {
      tail_population_ = std::max(0.0, matrix_(dim_ - 1, dim_ - 1).real());
    } else {
      double first = 0.0;
      double second = 0.0;
      for (int k = 0; k < dim_; ++k) {
        first += matrix_((dim_ - 1) * dim_ + k, (dim_ - 1) * dim_ + k).real();
        second += matrix_(k * dim_ + dim_ - 1, k * dim_ + dim_ - 1).real();
      }
      tail_population_ = std::max({0.0, first, second});
    }
  }

  int modes_;
  int dim_;
  CMatrix matrix_;
  double trace_defect_ = 0.0;
  double tail_population_ = 0.0;
  std::optional<CVector> vector_;
};

/// Kraus operators of a single-mode channel from a dim_in-level input to a dim_out-level output.
struct KrausSet {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<SparseCMatrix> operators;
  /// Operator-norm distance of sum K^dagger K from the identity on the input space.
  double completeness_defect = 0.0;
};

/// Controls output truncation of amplifier stages.
struct TruncationConfig {
  /// Largest population that may be lost to output truncation before a run aborts.
  double budget = 1e-9;
  /// Output Fock dimension; 0 selects default_amp_dim_out.
  int dim_out = 0;
  /// Rescale outputs to unit trace. Off by default: renormalization hides truncation loss.
  bool renormalize = false;
};

/// ceil(kappa d + 10 sqrt(kappa d) + 20).
inline int default_amp_dim_out(double kappa, int dim_in) {
  const double kd = kappa * dim_in;
  return static_cast<int>(std::ceil(kd + 10.0 * std::sqrt(kd) + 20.0));
}

namespace detail {

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double completeness_defect(const std::vector<SparseCMatrix>& ops, int dim_in) {
  CMatrix sum = CMatrix::Zero(dim_in, dim_in);
  for (const auto& k : ops) sum += CMatrix(k.adjoint() * k);
  sum -= CMatrix::Identity(dim_in, dim_in);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sum, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline void require_hermitian(const CMatrix& m, const char* where) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance * scale) {
    throw NonHermitian(std::string(where) + ": matrix is not Hermitian");
  }
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace detail

/// Amplitude <n+k| K_k |n> of the quantum-limited amplifier of gain kappa:
///   sqrt(C(n+k, k)) kappa^{-(n+1)/2} (1 - 1/kappa)^{k/2}.
/// Equivalently the two-mode-squeezer coefficient of |n+k, k> in U|n, 0>.
inline double amp_amplitude(double kappa, int n, int k) {
  if (k == 0) return std::pow(kappa, -0.5 * (n + 1));
  if (kappa == 1.0) return 0.0;
  const double log_amp =
      0.5 * (detail::log_binomial(n + k, k) + k * std::log1p(-1.0 / kappa) - (n + 1) * std::log(kappa));
  return std::exp(log_amp);
}

/// Amplitude <n-k| K_k |n> of pure loss with transmissivity eta: sqrt(C(n,k) eta^{n-k} (1-eta)^k).
inline double loss_amplitude(double eta, int n, int k) {
  if (k > n) return 0.0;
  const double p = std::exp(detail::log_binomial(n, k)) * std::pow(eta, n - k) * std::pow(1.0 - eta, k);
  return std::sqrt(p);
}

inline KrausSet kraus_loss(double eta, int dim) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("kraus_loss: eta must lie in [0, 1]");
  if (dim < 1) throw InvalidParameter("kraus_loss: dim must be >= 1");
  KrausSet set{dim, dim, {}, 0.0};
  for (int k = 0; k < dim; ++k) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int n = k; n < dim; ++n) {
      const double a = loss_amplitude(eta, n, k);
      if (a != 0.0) entries.emplace_back(n - k, n, a);
    }
    if (entries.empty()) continue;
    SparseCMatrix op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    set.operators.push_back(std::move(op));
  }
  set.completeness_defect = detail::completeness_defect(set.operators, dim);
  return set;
}

/// Quantum-limited amplifier Kraus set. Truncation at dim_out loses population from high input
/// levels; with `budget` set, a defect above it raises TruncationBudgetExceeded.
inline KrausSet kraus_amp(double kappa, int dim_in, int dim_out, std::optional<double> budget = std::nullopt) {
  if (!(kappa >= 1.0)) throw InvalidParameter("kraus_amp: kappa must be >= 1");
  if (dim_in < 1 || dim_out < dim_in) throw InvalidParameter("kraus_amp: need 1 <= dim_in <= dim_out");
  KrausSet set{dim_in, dim_out, {}, 0.0};
  for (int k = 0; k < dim_out; ++k) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int n = 0; n < dim_in && n + k < dim_out; ++n) {
      const double a = amp_amplitude(kappa, n, k);
      if (a != 0.0) entries.emplace_back(n + k, n, a);
    }
    if (entries.empty()) continue;
    SparseCMatrix op(dim_out, dim_in);
    op.setFromTriplets(entries.begin(), entries.end());
    set.operators.push_back(std::move(op));
  }
  set.completeness_defect = detail::completeness_defect(set.operators, dim_in);
  if (budget && set.completeness_defect > *budget) {
    throw TruncationBudgetExceeded("kraus_amp: output truncation too small", set.completeness_defect, *budget);
  }
  return set;
}

/// Kraus set of the phase-conjugating amplifier obtained by tracing the signal out of the
/// two-mode-squeezer dilation: L_s = sum_n a(n, s-n) |s-n><n|, s < dim_out.
inline KrausSet kraus_contra_amp(double kappa, int dim_in, int dim_out,
                                 std::optional<double> budget = std::nullopt) {
  if (!(kappa >= 1.0)) throw InvalidParameter("kraus_contra_amp: kappa must be >= 1");
  if (dim_in < 1 || dim_out < dim_in) throw InvalidParameter("kraus_contra_amp: need 1 <= dim_in <= dim_out");
  KrausSet set{dim_in, dim_out, {}, 0.0};
  for (int s = 0; s < dim_out; ++s) {
    std::vector<Eigen::Triplet<Complex>> entries;
    for (int n = 0; n < dim_in && n <= s; ++n) {
      const double a = amp_amplitude(kappa, n, s - n);
      if (a != 0.0) entries.emplace_back(s - n, n, a);
    }
    if (entries.empty()) continue;
    SparseCMatrix op(dim_out, dim_in);
    op.setFromTriplets(entries.begin(), entries.end());
    set.operators.push_back(std::move(op));
  }
  set.completeness_defect = detail::completeness_defect(set.operators, dim_in);
  if (budget && set.completeness_defect > *budget) {
    throw TruncationBudgetExceeded("kraus_contra_amp: output truncation too small", set.completeness_defect,
                                   *budget);
  }
  return set;
}

/// sum_k K rho K^dagger on a single-mode state, symmetrized afterwards.
inline FockDensity apply_kraus(const KrausSet& kraus, const FockDensity& rho, bool renormalize = false) {
  if (rho.modes() != 1 || rho.dim() != kraus.dim_in) {
    throw DimensionMismatch("apply_kraus: state dimension " + std::to_string(rho.dim()) +
                            " does not match Kraus input dimension " + std::to_string(kraus.dim_in));
  }
  CMatrix out = CMatrix::Zero(kraus.dim_out, kraus.dim_out);
  for (const auto& k : kraus.operators) {
    const CMatrix left = k * rho.matrix();
    out.noalias() += left * k.adjoint();
  }
  out = detail::hermitian_part(out);
  if (renormalize) out /= out.trace().real();
  return FockDensity(1, kraus.dim_out, std::move(out));
}

namespace detail {

inline SparseCMatrix kron(const SparseCMatrix& a, const SparseCMatrix& b) {
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseCMatrix::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseCMatrix::InnerIterator ib(b, kb); ib; ++ib) {
          entries.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                               ia.value() * ib.value());
        }
      }
    }
  }
  SparseCMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

}  // namespace detail

/// (first (x) second) applied to a two-mode state.
inline FockDensity apply_kraus_product(const KrausSet& first, const KrausSet& second, const FockDensity& rho) {
  if (rho.modes() != 2 || rho.dim() != first.dim_in || rho.dim() != second.dim_in ||
      first.dim_out != second.dim_out) {
    throw DimensionMismatch("apply_kraus_product: incompatible dimensions");
  }
  const Eigen::Index dout = first.dim_out;
  CMatrix out = CMatrix::Zero(dout * dout, dout * dout);
  for (const auto& a : first.operators) {
    for (const auto& b : second.operators) {
      const SparseCMatrix k = detail::kron(a, b);
      const CMatrix left = k * rho.matrix();
      out.noalias() += left * k.adjoint();
    }
  }
  return FockDensity(2, first.dim_out, detail::hermitian_part(out));
}

// ---------------------------------------------------------------------------------------------
// States

inline FockDensity fock_state(int n, int dim) {
  if (n < 0 || n >= dim) throw InvalidParameter("fock_state: level outside the truncated space");
  CVector psi = CVector::Zero(dim);
  psi(n) = 1.0;
  return FockDensity::pure(psi);
}

inline CVector coherent_vector(Complex alpha, int dim) {
  if (dim < 1) throw InvalidParameter("coherent_vector: dim must be >= 1");
  CVector psi(dim);
  Complex amp = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    psi(n) = amp;
    amp *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return psi / psi.norm();
}

/// Coherent state truncated to `dim` levels and renormalized. Check needs_truncation_warning()
/// when |alpha|^2 is not well below dim.
inline FockDensity coherent_state(Complex alpha, int dim) { return FockDensity::pure(coherent_vector(alpha, dim)); }

/// Squeezed vacuum S(r e^{i phi})|0>, truncated and renormalized.
inline CVector squeezed_vector(double r, double phi, int dim) {
  CVector psi = CVector::Zero(dim);
  const Complex ratio = -std::polar(std::tanh(r), phi);
  Complex amp = 1.0 / std::sqrt(std::cosh(r));
  for (int m = 0; 2 * m < dim; ++m) {
    psi(2 * m) = amp;
    // c_{2m+2} / c_{2m} = ratio * sqrt((2m+1)(2m+2)) / (2(m+1))
    amp *= ratio * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
  }
  return psi / psi.norm();
}

/// Thermal state with mean photon number N, truncated to `dim` levels and renormalized.
inline FockDensity thermal_fock(double N, int dim) {
  if (!(N >= 0.0)) throw InvalidParameter("thermal_fock: N must be >= 0");
  CMatrix m = CMatrix::Zero(dim, dim);
  const double ratio = N / (N + 1.0);
  double p = 1.0 / (N + 1.0);
  double total = 0.0;
  for (int n = 0; n < dim; ++n) {
    m(n, n) = p;
    total += p;
    p *= ratio;
  }
  return FockDensity(1, dim, m / total);
}

/// Zero-pads a single-mode state to a larger truncation.
inline FockDensity embed(const FockDensity& rho, int dim) {
  if (rho.modes() != 1 || dim < rho.dim()) throw DimensionMismatch("embed: target dimension too small");
  CMatrix m = CMatrix::Zero(dim, dim);
  m.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  return FockDensity(1, dim, std::move(m));
}

// ---------------------------------------------------------------------------------------------
// Spectral utilities

/// Eigenvalues in descending order, entries below kEigenvalueClamp set to 0.
inline std::vector<double> spectrum(const FockDensity& rho) {
  detail::require_hermitian(rho.matrix(), "spectrum");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::hermitian_part(rho.matrix()), Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& v : ev) {
    if (v < kEigenvalueClamp) v = 0.0;
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

/// -sum p log2 p over a clamped spectrum.
inline double entropy_of_spectrum(const std::vector<double>& ev) {
  double s = 0.0;
  for (double p : ev) {
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

/// Von Neumann entropy in bits.
inline double entropy(const FockDensity& rho) { return entropy_of_spectrum(spectrum(rho)); }

/// Half the trace norm of a - b.
inline double trace_distance(const FockDensity& a, const FockDensity& b) {
  if (a.modes() != b.modes() || a.dim() != b.dim()) throw DimensionMismatch("trace_distance: shapes differ");
  const CMatrix diff = a.matrix() - b.matrix();
  detail::require_hermitian(diff, "trace_distance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(detail::hermitian_part(diff), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Reduced state after tracing out `traced_mode` (0 or 1) of a two-mode state.
inline FockDensity partial_trace(const FockDensity& rho, int traced_mode) {
  if (rho.modes() != 2) throw ModeMismatch("partial_trace: two-mode state required");
  if (traced_mode != 0 && traced_mode != 1) throw InvalidParameter("partial_trace: mode must be 0 or 1");
  const int d = rho.dim();
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += traced_mode == 0 ? rho.matrix()(k * d + i, k * d + j) : rho.matrix()(i * d + k, j * d + k);
      }
      out(i, j) = acc;
    }
  }
  return FockDensity(1, d, std::move(out));
}

/// Expected total photon number over all modes.
inline double mean_photons(const FockDensity& rho) {
  const int d = rho.dim();
  double total = 0.0;
  for (Eigen::Index i = 0; i < rho.total_dim(); ++i) {
    const double pop = rho.matrix()(i, i).real();
    const int photons = rho.modes() == 1 ? static_cast<int>(i) : static_cast<int>(i / d + i % d);
    total += photons * pop;
  }
  return total;
}

/// <a> for a single-mode state.
inline Complex mean_amplitude(const FockDensity& rho) {
  if (rho.modes() != 1) throw ModeMismatch("mean_amplitude: single-mode state required");
  Complex acc = 0.0;
  for (int n = 1; n < rho.dim(); ++n) acc += std::sqrt(static_cast<double>(n)) * rho.matrix()(n, n - 1);
  return acc;
}

/// Entrywise complex conjugation in the Fock basis (the transposition map on Hermitian matrices).
inline FockDensity conj_fock(const FockDensity& rho) {
  return FockDensity(rho.modes(), rho.dim(), rho.matrix().conjugate());
}

// ---------------------------------------------------------------------------------------------
// Channels

namespace detail {

inline FockDensity finish_stage(FockDensity out, const FockDensity& in, const TruncationConfig& cfg,
                                const char* where) {
  const double lost = in.trace() - out.trace();
  if (lost > cfg.budget) throw TruncationBudgetExceeded(where, lost, cfg.budget);
  if (cfg.renormalize) return FockDensity(1, out.dim(), out.matrix() / out.trace());
  return out;
}

}  // namespace detail

/// Output truncation used for an amplifier stage of gain kappa acting on `dim_in` levels.
inline int amp_output_dim(double kappa, int dim_in, const TruncationConfig& cfg) {
  const int d = cfg.dim_out > 0 ? cfg.dim_out : default_amp_dim_out(kappa, dim_in);
  if (d < dim_in) throw InvalidParameter("truncation: dim_out smaller than the input dimension");
  return d;
}

/// Realizes a physical channel on a single-mode state as quantum-limited loss eta0 followed by a
/// quantum-limited (contra-)amplifier kappa0. The output always has amp_output_dim levels.
inline FockDensity apply_params(const ChannelParams& params, const FockDensity& rho,
                                const TruncationConfig& cfg = {}) {
  if (rho.modes() != 1) throw ModeMismatch("apply_params: single-mode state required");
  const Decomposition d = decompose(params);
  const int dim_out = amp_output_dim(d.kappa0, rho.dim(), cfg);
  FockDensity lossy = d.eta0 == 1.0 ? rho : apply_kraus(kraus_loss(d.eta0, rho.dim()), rho);
  const KrausSet gain =
      d.conjugating ? kraus_contra_amp(d.kappa0, rho.dim(), dim_out) : kraus_amp(d.kappa0, rho.dim(), dim_out);
  return detail::finish_stage(apply_kraus(gain, lossy), rho, cfg, "apply_params");
}

inline FockDensity apply_family(const ChannelFamily& family, const FockDensity& rho,
                                const TruncationConfig& cfg = {}) {
  return apply_params(canonical_params(family), rho, cfg);
}

/// Signal and idler reductions of U (psi (x) |0>) for the two-mode squeezer with kappa = cosh^2 r:
///   U|n, 0> = cosh(r)^{-(n+1)} sum_k tanh(r)^k sqrt(C(n+k, k)) |n+k, k>.
/// The signal carries the amplifier output, the idler the phase-conjugating amplifier output.
struct DilationOutput {
  FockDensity signal_out;
  FockDensity idler_out;
  /// Population of the two-mode state lost to truncation of both modes at dim_out.
  double lost_population = 0.0;
};

inline DilationOutput contra_amp_dilation(double kappa, const CVector& psi, int dim_out,
                                          std::optional<double> budget = std::nullopt) {
  if (!(kappa >= 1.0)) throw InvalidParameter("contra_amp_dilation: kappa must be >= 1");
  const int dim_in = static_cast<int>(psi.size());
  if (dim_out < dim_in) throw InvalidParameter("contra_amp_dilation: dim_out smaller than input dimension");
  // joint(o, e): signal level o = n + e, idler level e.
  CMatrix joint = CMatrix::Zero(dim_out, dim_out);
  for (int n = 0; n < dim_in; ++n) {
    if (psi(n) == Complex(0.0)) continue;
    for (int e = 0; n + e < dim_out; ++e) joint(n + e, e) = psi(n) * amp_amplitude(kappa, n, e);
  }
  const double lost = psi.squaredNorm() - joint.squaredNorm();
  if (budget && lost > *budget) throw TruncationBudgetExceeded("contra_amp_dilation", lost, *budget);
  CMatrix signal = joint * joint.adjoint();
  CMatrix idler = (joint.adjoint() * joint).transpose();
  return {FockDensity(1, dim_out, detail::hermitian_part(signal)),
          FockDensity(1, dim_out, detail::hermitian_part(idler)), lost};
}

inline DilationOutput contra_amp_dilation(double kappa, const FockDensity& psi, int dim_out,
                                          std::optional<double> budget = std::nullopt) {
  if (psi.modes() != 1) throw ModeMismatch("contra_amp_dilation: single-mode input required");
  if (!psi.vector()) throw InvalidParameter("contra_amp_dilation: input must be built from a state vector");
  return contra_amp_dilation(kappa, *psi.vector(), dim_out, budget);
}

/// Smallest idler truncation E such that every input level below dim_in keeps all but `budget`
/// of its population under the quantum-limited amplifier.
inline int amp_environment_dim(double kappa, int dim_in, double budget, int max_dim = 4096) {
  std::vector<double> kept(static_cast<std::size_t>(dim_in), 0.0);
  for (int e = 0; e < max_dim; ++e) {
    double worst = 0.0;
    for (int n = 0; n < dim_in; ++n) {
      const double a = amp_amplitude(kappa, n, e);
      kept[static_cast<std::size_t>(n)] += a * a;
      worst = std::max(worst, 1.0 - kept[static_cast<std::size_t>(n)]);
    }
    if (worst <= budget) return e + 1;
  }
  throw TruncationBudgetExceeded("amp_environment_dim: no truncation within max_dim", 1.0, budget);
}

/// Spectrum of (A_kappa (x) A_kappa)(|psi><psi|) for a two-mode pure state psi (length dim_in^2),
/// computed from the environment side of the product dilation. The global state is pure, so the
/// nonzero spectra of the output and environment reductions coincide; the environment Gram matrix
/// is env_dim^2 square instead of (dim_in + env_dim)^2.
struct ProductSpectrum {
  std::vector<double> eigenvalues;  // descending, clamped
  double lost_population = 0.0;
};

inline ProductSpectrum product_amp_output_spectrum(double kappa, const CVector& psi, int env_dim) {
  const int dim_in = static_cast<int>(std::lround(std::sqrt(static_cast<double>(psi.size()))));
  if (dim_in * dim_in != psi.size()) throw DimensionMismatch("product_amp_output_spectrum: psi is not two-mode");
  // amps(n, e) = a(n, e)
  Eigen::MatrixXd amps(dim_in, env_dim);
  for (int n = 0; n < dim_in; ++n) {
    for (int e = 0; e < env_dim; ++e) amps(n, e) = amp_amplitude(kappa, n, e);
  }
  // Global amplitude of |o1 o2>|e1 e2> is psi(n1 n2) a(n1, e1) a(n2, e2) with o_i = n_i + e_i.
  // gram((e1 e2), (f1 f2)) = sum_o conj(w_e(o)) w_f(o), nonzero only when |e_i - f_i| < dim_in.
  const Eigen::Index env2 = static_cast<Eigen::Index>(env_dim) * env_dim;
  CMatrix gram = CMatrix::Zero(env2, env2);
  for (int e1 = 0; e1 < env_dim; ++e1) {
    for (int e2 = 0; e2 < env_dim; ++e2) {
      const Eigen::Index row = static_cast<Eigen::Index>(e1) * env_dim + e2;
      for (int f1 = std::max(0, e1 - dim_in + 1); f1 < std::min(env_dim, e1 + dim_in); ++f1) {
        for (int f2 = std::max(0, e2 - dim_in + 1); f2 < std::min(env_dim, e2 + dim_in); ++f2) {
          const Eigen::Index col = static_cast<Eigen::Index>(f1) * env_dim + f2;
          if (col < row) continue;
          Complex acc = 0.0;
          // o1 = n1 + e1 = m1 + f1
          for (int n1 = std::max(0, f1 - e1); n1 < dim_in && n1 + e1 - f1 < dim_in; ++n1) {
            const int m1 = n1 + e1 - f1;
            const double w1 = amps(n1, e1) * amps(m1, f1);
            for (int n2 = std::max(0, f2 - e2); n2 < dim_in && n2 + e2 - f2 < dim_in; ++n2) {
              const int m2 = n2 + e2 - f2;
              acc += std::conj(psi(n1 * dim_in + n2)) * psi(m1 * dim_in + m2) * (w1 * amps(n2, e2) * amps(m2, f2));
            }
          }
          gram(row, col) = acc;
          gram(col, row) = std::conj(acc);
        }
      }
    }
  }
  ProductSpectrum out;
  out.lost_population = psi.squaredNorm() - gram.trace().real();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& v : out.eigenvalues) {
    if (v < kEigenvalueClamp) v = 0.0;
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<>());
  return out;
}

}  // namespace bcl
