#pragma once

// Canonical (tau, y) description of single-mode phase-covariant and phase-contravariant
// Gaussian channels, with the four named families, classification, composition,
// decomposition into quantum-limited stages, and transposition of contravariant maps.

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "bcl/errors.hpp"

namespace bcl {

/// Absolute tolerance used when classifying channels on the physicality or
/// entanglement-breaking boundary from numeric (tau, y).
inline constexpr double kBoundaryTolerance = 1e-12;

/// Single-mode Gaussian channel acting on covariance matrices (vacuum = identity) as
///   covariant:     V -> tau V + y I
///   contravariant: V -> |tau| Z V Z + y I,   Z = diag(1, -1).
/// tau is signed: contravariant channels carry tau <= 0, matching the usual (tau, y) plane.
struct ChannelParams {
  double tau = 1.0;
  double y = 0.0;
  bool conjugating = false;

  /// |tau|, the gain applied to the quadratures.
  double gain() const { return std::abs(tau); }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

struct Classification {
  bool is_physical = false;
  bool is_quantum_limited = false;
  bool is_entanglement_breaking = false;
};

/// Pair of quantum-limited stages realizing a channel: loss eta0 first, then an amplifier of
/// gain kappa0 (phase-conjugating when `conjugating` is set).
struct Decomposition {
  double eta0 = 1.0;
  double kappa0 = 1.0;
  bool conjugating = false;
};

struct ThermalLoss {
  double eta;
  double N;
};
struct AdditiveNoise {
  double n;
};
struct Amplifier {
  double kappa;
  double N;
};
struct ContraAmplifier {
  double kappa;
  double N;
};

/// One of the four named channel families. Construct through the static factories,
/// which reject out-of-range parameters.
class ChannelFamily {
 public:
  using Variant = std::variant<ThermalLoss, AdditiveNoise, Amplifier, ContraAmplifier>;

  static ChannelFamily thermal(double eta, double N) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("thermal: eta must lie in [0, 1]");
    require_nonnegative(N, "thermal: N");
    return ChannelFamily(ThermalLoss{eta, N});
  }
  static ChannelFamily additive_noise(double n) {
    require_nonnegative(n, "additive noise: n");
    return ChannelFamily(AdditiveNoise{n});
  }
  static ChannelFamily amplifier(double kappa, double N) {
    if (!(kappa >= 1.0) || std::isinf(kappa)) throw InvalidParameter("amplifier: kappa must be >= 1");
    require_nonnegative(N, "amplifier: N");
    return ChannelFamily(Amplifier{kappa, N});
  }
  static ChannelFamily contra_amplifier(double kappa, double N) {
    if (!(kappa >= 1.0) || std::isinf(kappa)) {
      throw InvalidParameter("contravariant amplifier: kappa must be >= 1");
    }
    require_nonnegative(N, "contravariant amplifier: N");
    return ChannelFamily(ContraAmplifier{kappa, N});
  }

  const Variant& variant() const { return v_; }

  std::string name() const {
    return std::visit(
        [](const auto& f) -> std::string {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, ThermalLoss>) return "thermal";
          else if constexpr (std::is_same_v<T, AdditiveNoise>) return "addnoise";
          else if constexpr (std::is_same_v<T, Amplifier>) return "amp";
          else return "contra-amp";
        },
        v_);
  }

 private:
  explicit ChannelFamily(Variant v) : v_(v) {}

  static void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0) || std::isinf(x)) throw InvalidParameter(std::string(what) + " must be >= 0");
  }

  Variant v_;
};

/// (tau, y, conjugating) of a named family.
inline ChannelParams canonical_params(const ChannelFamily& family) {
  return std::visit(
      [](const auto& f) -> ChannelParams {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          return {f.eta, (1.0 - f.eta) * (2.0 * f.N + 1.0), false};
        } else if constexpr (std::is_same_v<T, AdditiveNoise>) {
          return {1.0, 2.0 * f.n, false};
        } else if constexpr (std::is_same_v<T, Amplifier>) {
          return {f.kappa, (f.kappa - 1.0) * (2.0 * f.N + 1.0), false};
        } else {
          return {-(f.kappa - 1.0), f.kappa * (2.0 * f.N + 1.0), true};
        }
      },
      family.variant());
}

/// Right-hand side of the physicality condition y >= bound: |tau - 1| covariant, |tau| + 1
/// contravariant.
inline double physicality_bound(const ChannelParams& p) {
  return p.conjugating ? p.gain() + 1.0 : std::abs(p.tau - 1.0);
}

inline Classification classify(const ChannelParams& p) {
  Classification c;
  if (std::isnan(p.tau) || std::isnan(p.y) || p.y < 0.0 || (p.conjugating && p.tau > 0.0)) {
    return c;
  }
  const double bound = physicality_bound(p);
  c.is_physical = p.y >= bound - kBoundaryTolerance;
  c.is_quantum_limited = c.is_physical && std::abs(p.y - bound) <= kBoundaryTolerance;
  c.is_entanglement_breaking = c.is_physical && p.y >= p.gain() + 1.0 - kBoundaryTolerance;
  return c;
}

/// Exact classification of a named family: comparisons are made on the family parameters,
/// so saturated families are never misclassified by rounding.
inline Classification classify(const ChannelFamily& family) {
  return std::visit(
      [](const auto& f) -> Classification {
        using T = std::decay_t<decltype(f)>;
        Classification c{true, false, false};
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          // y = (1-eta)(2N+1) against |tau-1| = 1-eta and |tau|+1 = 1+eta.
          c.is_quantum_limited = f.N == 0.0 || f.eta == 1.0;
          c.is_entanglement_breaking = (1.0 - f.eta) * (2.0 * f.N + 1.0) >= 1.0 + f.eta;
        } else if constexpr (std::is_same_v<T, AdditiveNoise>) {
          c.is_quantum_limited = f.n == 0.0;
          c.is_entanglement_breaking = f.n >= 1.0;
        } else if constexpr (std::is_same_v<T, Amplifier>) {
          c.is_quantum_limited = f.N == 0.0 || f.kappa == 1.0;
          c.is_entanglement_breaking = (f.kappa - 1.0) * (2.0 * f.N + 1.0) >= f.kappa + 1.0;
        } else {
          c.is_quantum_limited = f.N == 0.0;
          c.is_entanglement_breaking = true;
        }
        return c;
      },
      family.variant());
}

inline void require_physical(const ChannelParams& p, const char* where) {
  if (!classify(p).is_physical) {
    throw NonPhysical(std::string(where) + ": channel (tau=" + std::to_string(p.tau) +
                      ", y=" + std::to_string(p.y) + ") is not physical");
  }
}

/// Quantum-limited pure-loss channel of transmissivity eta.
inline ChannelParams loss(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("loss: eta must lie in [0, 1]");
  return {eta, 1.0 - eta, false};
}

/// Quantum-limited amplifier of gain kappa.
inline ChannelParams amp(double kappa) {
  if (!(kappa >= 1.0)) throw InvalidParameter("amp: kappa must be >= 1");
  return {kappa, kappa - 1.0, false};
}

/// Quantum-limited phase-conjugating amplifier of gain kappa (the complementary channel of amp).
inline ChannelParams contra_amp(double kappa) {
  if (!(kappa >= 1.0)) throw InvalidParameter("contra_amp: kappa must be >= 1");
  return {-(kappa - 1.0), kappa, true};
}

/// The channel "second after first".
inline ChannelParams compose(const ChannelParams& first, const ChannelParams& second) {
  require_physical(first, "compose(first)");
  require_physical(second, "compose(second)");
  const bool conj = first.conjugating != second.conjugating;
  const double gain = first.gain() * second.gain();
  ChannelParams out{conj ? -gain : gain, second.gain() * first.y + second.y, conj};
  require_physical(out, "compose(result)");
  return out;
}

/// Unique (eta0, kappa0) such that the quantum-limited loss eta0 followed by the quantum-limited
/// (contra-)amplifier kappa0 equals p.
inline Decomposition decompose(const ChannelParams& p) {
  require_physical(p, "decompose");
  Decomposition d;
  d.conjugating = p.conjugating;
  if (!p.conjugating) {
    // tau = eta0 kappa0, y = kappa0 (1 - eta0) + kappa0 - 1  =>  kappa0 = (y + tau + 1) / 2.
    d.kappa0 = std::max(1.0, 0.5 * (p.y + p.tau + 1.0));
    d.eta0 = std::clamp(p.tau / d.kappa0, 0.0, 1.0);
  } else {
    // |tau| = eta0 (kappa0 - 1), y = (kappa0 - 1)(1 - eta0) + kappa0  =>  kappa0 = (y + |tau| + 1) / 2.
    const double excess = std::max(0.0, 0.5 * (p.y + p.gain() - 1.0));
    d.kappa0 = 1.0 + excess;
    // kappa0 = 1 forces tau = 0: every input is mapped to vacuum and eta0 is immaterial.
    d.eta0 = excess > 0.0 ? std::clamp(p.gain() / excess, 0.0, 1.0) : 1.0;
  }
  return d;
}

inline Decomposition decompose(const ChannelFamily& family) {
  return decompose(canonical_params(family));
}

/// Channel realized by a decomposition (loss stage, then amplifier stage).
inline ChannelParams recompose(const Decomposition& d) {
  return compose(loss(d.eta0), d.conjugating ? contra_amp(d.kappa0) : amp(d.kappa0));
}

/// Transposition (complex conjugation in the Fock basis) applied after a contravariant channel.
/// The result is the covariant channel with the same |tau| and y.
inline ChannelParams transpose_channel(const ChannelParams& p) {
  if (!p.conjugating) {
    throw UnsupportedDirection("transpose_channel: only contravariant channels are supported");
  }
  return {p.gain(), p.y, false};
}

}  // namespace bcl
