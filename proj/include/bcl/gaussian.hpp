#pragma once

// Gaussian states as (mean, covariance) with vacuum covariance = identity, the action of
// phase-covariant/contravariant channels on them, entropies from symplectic spectra, and the
// two-mode squeezed thermal states used for entanglement-of-formation bookkeeping.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "bcl/channel.hpp"
#include "bcl/errors.hpp"
#include "bcl/thermal.hpp"

namespace bcl {

/// Quadrature ordering (x1, p1, x2, p2, ...). Vacuum has cov = I, mean = 0.
struct GaussianState {
  int modes = 1;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Standard symplectic form for `modes` modes in (x1, p1, x2, p2, ...) ordering.
inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

/// Symplectic eigenvalues in ascending order, one per mode. Computed as the positive
/// eigenvalues of the Hermitian matrix i V^{1/2} Omega V^{1/2}, which share the spectrum
/// {+-nu_k} of i Omega V.
inline std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  if (n == 0 || n % 2 != 0 || cov.cols() != n) {
    throw DimensionMismatch("symplectic_eigenvalues: covariance must be 2m x 2m");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidCovariance("symplectic_eigenvalues: covariance is not positive definite");
  }
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXcd herm =
      std::complex<double>(0.0, 1.0) * (root * symplectic_form(static_cast<int>(n / 2)) * root).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm, Eigen::EigenvaluesOnly);
  // Eigenvalues come sorted ascending as -nu_m..-nu_1, nu_1..nu_m.
  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(n / 2));
  for (Eigen::Index k = n / 2; k < n; ++k) nu.push_back(hs.eigenvalues()(k));
  return nu;
}

/// Throws InvalidCovariance unless V is symmetric and V + i Omega >= 0 (within 1e-10).
inline void validate(const GaussianState& s) {
  const Eigen::Index dim = 2 * s.modes;
  if (s.modes < 1 || s.mean.size() != dim || s.cov.rows() != dim || s.cov.cols() != dim) {
    throw DimensionMismatch("GaussianState: mean/cov sizes do not match the mode count");
  }
  if ((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, s.cov.cwiseAbs().maxCoeff())) {
    throw InvalidCovariance("GaussianState: covariance is not symmetric");
  }
  const Eigen::MatrixXcd test =
      s.cov.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(s.modes).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(test, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidCovariance("GaussianState: covariance violates the uncertainty principle");
  }
}

inline GaussianState vacuum_state(int modes = 1) {
  return {modes, Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

/// Single-mode Gibbs state with mean photon number N: cov = (2N + 1) I.
inline GaussianState thermal_state(double N) {
  if (!(N >= 0.0)) throw InvalidParameter("thermal_state: N must be >= 0");
  GaussianState s = vacuum_state(1);
  s.cov *= 2.0 * N + 1.0;
  return s;
}

/// Coherent state |alpha>: mean (2 Re alpha, 2 Im alpha), cov = I.
inline GaussianState coherent_gaussian(std::complex<double> alpha) {
  GaussianState s = vacuum_state(1);
  s.mean << 2.0 * alpha.real(), 2.0 * alpha.imag();
  return s;
}

/// Single-mode channel action. The contravariant branch follows chi(z) -> chi(-sqrt|tau| z*),
/// which maps a coherent amplitude alpha to sqrt|tau| conj(alpha).
inline GaussianState apply_channel(const ChannelParams& params, const GaussianState& state) {
  require_physical(params, "apply_channel");
  if (state.modes != 1) throw ModeMismatch("apply_channel: single-mode state required");
  GaussianState out = state;
  const double gain = params.gain();
  if (!params.conjugating) {
    out.cov = gain * state.cov + params.y * Eigen::MatrixXd::Identity(2, 2);
    out.mean = std::sqrt(gain) * state.mean;
  } else {
    const Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    out.cov = gain * z * state.cov * z + params.y * Eigen::MatrixXd::Identity(2, 2);
    out.mean = std::sqrt(gain) * z * state.mean;
  }
  return out;
}

/// Von Neumann entropy in bits: sum over symplectic eigenvalues of g((nu - 1) / 2).
inline double gaussian_entropy(const GaussianState& state) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(state.cov)) {
    if (nu < 1.0 - 1e-9) {
      throw InvalidCovariance("gaussian_entropy: symplectic eigenvalue below 1");
    }
    s += thermal_entropy(std::max(0.0, photons_from_variance(nu)));
  }
  return s;
}

/// Output of a two-mode squeezer of gain kappa with a thermal state (mean N) in the first
/// port and vacuum in the second:
///   cov = [[a I, c Z], [c Z, b I]],  a = 2(N+1)kappa - 1,  b = 2(N+1)kappa - (2N+1),
///   c = 2(N+1) sqrt(kappa(kappa-1)).
inline GaussianState two_mode_squeezed_thermal(double kappa, double N) {
  if (!(kappa >= 1.0)) throw InvalidParameter("two_mode_squeezed_thermal: kappa must be >= 1");
  if (!(N >= 0.0)) throw InvalidParameter("two_mode_squeezed_thermal: N must be >= 0");
  const double a = 2.0 * (N + 1.0) * kappa - 1.0;
  const double b = 2.0 * (N + 1.0) * kappa - (2.0 * N + 1.0);
  const double c = 2.0 * (N + 1.0) * std::sqrt(kappa * (kappa - 1.0));
  GaussianState s = vacuum_state(2);
  s.cov << a, 0, c, 0,  //
      0, a, 0, -c,      //
      c, 0, b, 0,       //
      0, -c, 0, b;
  return s;
}

/// Split of the two-mode squeezed thermal covariance into the pure two-mode squeezed vacuum
/// part and a positive residual that can be generated by correlated random displacements.
struct EofDecomposition {
  Eigen::Matrix4d gamma0;
  Eigen::Matrix4d residual;
  std::array<double, 4> residual_eigenvalues{};  // descending
};

inline EofDecomposition eof_decompose(double kappa, double N) {
  EofDecomposition d;
  d.gamma0 = two_mode_squeezed_thermal(kappa, 0.0).cov;
  const Eigen::Matrix4d gamma = two_mode_squeezed_thermal(kappa, N).cov;
  d.residual = gamma - d.gamma0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(d.residual, Eigen::EigenvaluesOnly);
  for (int k = 0; k < 4; ++k) d.residual_eigenvalues[static_cast<std::size_t>(k)] = es.eigenvalues()(3 - k);
  return d;
}

/// Entanglement of formation of the two-mode squeezed thermal state, in bits. Independent of N.
inline double eof_value(double kappa, double N) {
  if (!(kappa >= 1.0)) throw InvalidParameter("eof_value: kappa must be >= 1");
  if (!(N >= 0.0)) throw InvalidParameter("eof_value: N must be >= 0");
  return thermal_entropy(kappa - 1.0);
}

}  // namespace bcl
