#pragma once

#include <cmath>
#include <numbers>

#include "bcl/errors.hpp"

namespace bcl {

/// Von Neumann entropy, in bits, of a single-mode Gibbs thermal state with mean photon number x:
///   g(x) = (x+1) log2(x+1) - x log2(x),  g(0) = 0.
inline double thermal_entropy(double x) {
  if (x < 0.0 || std::isnan(x)) {
    throw NegativeArgument("thermal_entropy: mean photon number must be >= 0");
  }
  if (x == 0.0) return 0.0;
  if (x < 1e-8) {
    // x log2(1 + 1/x) + log2(1 + x); avoids the cancellation of the two large terms.
    return (x * std::log1p(1.0 / x) + std::log1p(x)) / std::numbers::ln2;
  }
  if (x < 1.0) return (x + 1.0) * std::log1p(x) / std::numbers::ln2 - x * std::log2(x);
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

/// Mean photon number of a single-mode thermal state with covariance nu * I (vacuum = I).
inline double photons_from_variance(double nu) { return 0.5 * (nu - 1.0); }

}  // namespace bcl
