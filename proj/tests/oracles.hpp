#pragma once

// Reference computations that share no code with the library: direct sums, textbook
// closed forms, and values frozen from an arbitrary-precision evaluation.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Entropy in bits of the geometric photon distribution with mean N, by direct summation.
inline double thermal_entropy_by_sum(double N) {
  if (N == 0.0) return 0.0;
  const long double q = N / (N + 1.0L);
  long double p = 1.0L / (N + 1.0L);
  long double s = 0.0L;
  for (int k = 0; k < 200000 && p > 1e-30L; ++k) {
    s -= p * std::log2(p);
    p *= q;
  }
  return static_cast<double>(s);
}

/// Symplectic eigenvalues of a two-mode covariance [[A, C], [C^T, B]] from the invariants
/// Delta = det A + det B + 2 det C and det V.
inline std::vector<double> two_mode_symplectic(const Eigen::Matrix4d& v) {
  const double delta = v.topLeftCorner<2, 2>().determinant() + v.bottomRightCorner<2, 2>().determinant() +
                       2.0 * v.topRightCorner<2, 2>().determinant();
  const double det = v.determinant();
  const double root = std::sqrt(std::max(0.0, delta * delta - 4.0 * det));
  return {std::sqrt(0.5 * (delta - root)), std::sqrt(0.5 * (delta + root))};
}

/// Photon distribution of a Fock state |n> after pure loss eta: binomial(n, eta).
inline std::vector<double> lossy_fock_distribution(int n, double eta) {
  std::vector<double> p(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    p[static_cast<std::size_t>(k)] =
        std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(eta, k) *
        std::pow(1.0 - eta, n - k);
  }
  return p;
}

/// Photon distribution of A_kappa(|n><n|): negative binomial, P(n + k) = C(n+k, k) kappa^{-(n+1)} (1 - 1/kappa)^k.
inline double amplified_fock_probability(int n, int k, double kappa) {
  return std::exp(std::lgamma(n + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n + 1.0)) *
         std::pow(kappa, -(n + 1.0)) * std::pow(1.0 - 1.0 / kappa, k);
}

// Thermal-entropy values evaluated in 50-digit arithmetic.
inline constexpr double kG0p25 = 0.90241011860920293;
inline constexpr double kG0p5 = 1.3774437510817343;
inline constexpr double kG2 = 2.7548875021634685;
inline constexpr double kG3 = 3.2451124978365315;
inline constexpr double kG5p5 = 4.0259842654119641;
inline constexpr double kG10 = 4.8344668561366463;
inline constexpr double kG11 = 4.9658022036436044;
inline constexpr double kG12 = 5.0861663271803239;

// Capacities from the same high-precision evaluation.
inline constexpr double kCapThermal0p5N1E10 = 2.6485405143302299;
inline constexpr double kCapAddNoise2E10 = 2.3312788250168554;
inline constexpr double kCapAmp2N0E10 = 3.8688297316665736;
inline constexpr double kCapContra2N0E10 = 2.9658022036436044;

}  // namespace oracle
