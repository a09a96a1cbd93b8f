#pragma once

// Deterministic pure-state samplers. Every state is a pure function of (family, dim, seed, index),
// so parallel consumers see the same states regardless of scheduling.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bcl/errors.hpp"
#include "bcl/fock.hpp"

namespace bcl {

enum class SampleFamily { haar, fock, coherent_grid, squeezed_grid };

inline std::string to_string(SampleFamily f) {
  switch (f) {
    case SampleFamily::haar: return "haar";
    case SampleFamily::fock: return "fock";
    case SampleFamily::coherent_grid: return "coherent_grid";
    case SampleFamily::squeezed_grid: return "squeezed_grid";
  }
  return "unknown";
}

inline SampleFamily sample_family_from_string(const std::string& s) {
  if (s == "haar") return SampleFamily::haar;
  if (s == "fock") return SampleFamily::fock;
  if (s == "coherent_grid") return SampleFamily::coherent_grid;
  if (s == "squeezed_grid") return SampleFamily::squeezed_grid;
  throw InvalidParameter("unknown sample family: " + s);
}

/// splitmix64 finalizer; used to derive independent seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return mix_seed(master ^ mix_seed(h));
}

/// Generator for one (seed, index) pair.
inline std::mt19937_64 indexed_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Normalized complex-Gaussian vector of length `length` (Haar-distributed pure state).
inline CVector haar_vector(Eigen::Index length, std::uint64_t seed, std::uint64_t index) {
  auto rng = indexed_engine(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(length);
  for (Eigen::Index i = 0; i < length; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

/// Grid layout: 8 phases times 8 nonzero radii, preceded by the vacuum at index 0.
inline constexpr int kGridPhases = 8;
inline constexpr int kGridRadii = 8;

/// Number of distinct states a family provides at this dimension (haar is unbounded: -1).
inline int family_size(SampleFamily family, int dim_in) {
  switch (family) {
    case SampleFamily::haar: return -1;
    case SampleFamily::fock: return dim_in;
    case SampleFamily::coherent_grid:
    case SampleFamily::squeezed_grid: return 1 + kGridPhases * kGridRadii;
  }
  return 0;
}

/// Coherent amplitudes up to |alpha|^2 = dim/4; squeezing up to sinh^2 r = dim/4.
inline CVector sample_pure_vector(SampleFamily family, int dim_in, std::uint64_t seed, std::uint64_t index) {
  if (dim_in < 2) throw InvalidParameter("sample_pure_vector: dim_in must be >= 2");
  switch (family) {
    case SampleFamily::haar: return haar_vector(dim_in, seed, index);
    case SampleFamily::fock: {
      CVector v = CVector::Zero(dim_in);
      v(static_cast<Eigen::Index>(index % static_cast<std::uint64_t>(dim_in))) = 1.0;
      return v;
    }
    case SampleFamily::coherent_grid:
    case SampleFamily::squeezed_grid: {
      const auto size = static_cast<std::uint64_t>(family_size(family, dim_in));
      const std::uint64_t i = index % size;
      if (i == 0) {
        CVector v = CVector::Zero(dim_in);
        v(0) = 1.0;
        return v;
      }
      const int radius_index = static_cast<int>((i - 1) / kGridPhases) + 1;
      const int phase_index = static_cast<int>((i - 1) % kGridPhases);
      const double phase = 2.0 * std::numbers::pi * phase_index / kGridPhases;
      const double frac = static_cast<double>(radius_index) / kGridRadii;
      const double max_photons = dim_in / 4.0;
      if (family == SampleFamily::coherent_grid) {
        return coherent_vector(std::polar(frac * std::sqrt(max_photons), phase), dim_in);
      }
      return squeezed_vector(frac * std::asinh(std::sqrt(max_photons)), phase, dim_in);
    }
  }
  throw InvalidParameter("sample_pure_vector: unknown family");
}

/// The first `count` states of a family (grids and fock stop at their size).
inline std::vector<FockDensity> sample_pure_states(int dim_in, int count, std::uint64_t seed, SampleFamily family) {
  const int size = family_size(family, dim_in);
  const int n = size < 0 ? count : std::min(count, size);
  std::vector<FockDensity> out;
  out.reserve(static_cast<std::size_t>(std::max(0, n)));
  for (int i = 0; i < n; ++i) {
    out.push_back(FockDensity::pure(sample_pure_vector(family, dim_in, seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

}  // namespace bcl
