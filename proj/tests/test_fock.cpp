#include <random>

#include <gtest/gtest.h>

#include "bcl/fock.hpp"
#include "bcl/gaussian.hpp"
#include "bcl/sampling.hpp"
#include "bcl/thermal.hpp"
#include "oracles.hpp"

using bcl::ChannelFamily;
using bcl::CVector;
using bcl::FockDensity;

namespace {

// Moments of the Gaussian state with the same first and second moments.
double gaussian_photons(const bcl::GaussianState& s) {
  return 0.25 * (s.cov(0, 0) + s.cov(1, 1)) + 0.25 * s.mean.squaredNorm() - 0.5;
}

bcl::Complex gaussian_amplitude(const bcl::GaussianState& s) { return {0.5 * s.mean(0), 0.5 * s.mean(1)}; }

// <a b> of the pure two-mode state sum J(o, e) |o, e>.
bcl::Complex joint_correlation(const bcl::CMatrix& joint) {
  bcl::Complex acc = 0.0;
  for (int o = 1; o < joint.rows(); ++o) {
    for (int e = 1; e < joint.cols(); ++e) {
      acc += std::conj(joint(o - 1, e - 1)) * joint(o, e) * std::sqrt(static_cast<double>(o) * e);
    }
  }
  return acc;
}

}  // namespace

TEST(FockDensity, Metadata) {
  const auto vac = bcl::fock_state(0, 5);
  EXPECT_EQ(vac.dim(), 5);
  EXPECT_EQ(vac.trace_defect(), 0.0);
  EXPECT_EQ(vac.tail_population(), 0.0);
  EXPECT_FALSE(vac.needs_truncation_warning());
  const auto edge = bcl::fock_state(4, 5);
  EXPECT_EQ(edge.tail_population(), 1.0);
  EXPECT_TRUE(edge.needs_truncation_warning());
  EXPECT_THROW(FockDensity(1, 3, bcl::CMatrix::Identity(4, 4)), bcl::DimensionMismatch);
  EXPECT_THROW(FockDensity(3, 2, bcl::CMatrix::Identity(8, 8)), bcl::InvalidParameter);
}

TEST(Kraus, LossCompleteAndBinomial) {
  const auto set = bcl::kraus_loss(0.3, 12);
  EXPECT_LT(set.completeness_defect, 1e-13);
  const auto out = bcl::apply_kraus(set, bcl::fock_state(7, 12));
  const auto p = oracle::lossy_fock_distribution(7, 0.3);
  for (int k = 0; k <= 7; ++k) EXPECT_NEAR(out.matrix()(k, k).real(), p[static_cast<std::size_t>(k)], 1e-14);
  EXPECT_NEAR(bcl::mean_photons(out), 0.3 * 7, 1e-13);
}

TEST(Kraus, AmplifierNegativeBinomial) {
  const double kappa = 1.8;
  const auto set = bcl::kraus_amp(kappa, 6, 120);
  EXPECT_LT(set.completeness_defect, 1e-12);
  const auto out = bcl::apply_kraus(set, bcl::fock_state(3, 6));
  for (int k = 0; k < 40; ++k) {
    EXPECT_NEAR(out.matrix()(3 + k, 3 + k).real(), oracle::amplified_fock_probability(3, k, kappa), 1e-14);
  }
  EXPECT_NEAR(bcl::mean_photons(out), kappa * 3 + kappa - 1.0, 1e-10);
}

TEST(Kraus, TruncationBudget) {
  EXPECT_THROW(bcl::kraus_amp(3.0, 10, 20, 1e-9), bcl::TruncationBudgetExceeded);
  EXPECT_THROW(bcl::kraus_contra_amp(3.0, 10, 20, 1e-9), bcl::TruncationBudgetExceeded);
  EXPECT_NO_THROW(bcl::kraus_amp(3.0, 10, 200, 1e-9));
  try {
    bcl::kraus_amp(3.0, 10, 20, 1e-9);
  } catch (const bcl::TruncationBudgetExceeded& e) {
    EXPECT_GT(e.consumed(), 1e-9);
    EXPECT_EQ(e.budget(), 1e-9);
  }
  // apply_params refuses to lose more than the budget and never renormalizes silently.
  bcl::TruncationConfig tight{1e-9, 25, false};
  EXPECT_THROW(bcl::apply_family(ChannelFamily::amplifier(3.0, 0.0), bcl::fock_state(9, 10), tight),
               bcl::TruncationBudgetExceeded);
}

TEST(Kraus, DefaultOutputDimension) {
  EXPECT_EQ(bcl::default_amp_dim_out(1.5, 16), 93);
  EXPECT_EQ(bcl::default_amp_dim_out(3.0, 40), 250);
  for (double kappa : {1.2, 1.5, 2.0, 3.0}) {
    for (int d : {4, 16, 40}) {
      // The default covers the lower half of the input space; the top levels need more room.
      const auto set = bcl::kraus_amp(kappa, d, bcl::default_amp_dim_out(kappa, d));
      for (int n = 0; n <= d / 2; ++n) {
        EXPECT_LT(1.0 - bcl::apply_kraus(set, bcl::fock_state(n, d)).trace(), 1e-9) << kappa << " " << d << " " << n;
      }
    }
  }
}

TEST(CrossValidation, AmplifierVacuumEntropy) {
  const auto out = bcl::apply_kraus(bcl::kraus_amp(1.5, 1, 80), bcl::fock_state(0, 1));
  EXPECT_NEAR(bcl::entropy(out), oracle::kG0p5, 1e-6);
  // Geometric spectrum with ratio (kappa - 1) / kappa.
  const auto ev = bcl::spectrum(out);
  EXPECT_NEAR(ev[0], 1.0 / 1.5, 1e-15);
  EXPECT_NEAR(ev[1] / ev[0], 1.0 / 3.0, 1e-13);
}

TEST(CrossValidation, FamiliesAgainstPhaseSpace) {
  const std::vector<ChannelFamily> families{ChannelFamily::thermal(0.6, 0.8), ChannelFamily::additive_noise(0.7),
                                            ChannelFamily::amplifier(1.7, 0.4),
                                            ChannelFamily::contra_amplifier(1.6, 0.3)};
  const int dim = 30;
  const bcl::Complex alpha(0.8, -0.5);
  for (const auto& f : families) {
    const auto p = bcl::canonical_params(f);
    struct Case {
      FockDensity fock;
      bcl::GaussianState gauss;
    };
    const std::vector<Case> cases{{bcl::fock_state(0, dim), bcl::vacuum_state(1)},
                                  {bcl::coherent_state(alpha, dim), bcl::coherent_gaussian(alpha)},
                                  {bcl::thermal_fock(0.6, dim), bcl::thermal_state(0.6)}};
    for (const auto& c : cases) {
      ASSERT_LE(c.fock.tail_population(), 1e-8);
      const auto out = bcl::apply_family(f, c.fock);
      const auto g = bcl::apply_channel(p, c.gauss);
      EXPECT_NEAR(bcl::entropy(out), bcl::gaussian_entropy(g), 1e-6) << f.name();
      EXPECT_NEAR(bcl::mean_photons(out), gaussian_photons(g), 1e-7) << f.name();
      EXPECT_LT(std::abs(bcl::mean_amplitude(out) - gaussian_amplitude(g)), 1e-7) << f.name();
    }
  }
}

TEST(CrossValidation, ContraAmplifierConjugatesTheAmplitude) {
  // The idler of the squeezer carries sqrt(kappa - 1) conj(alpha); the phase-space action must agree.
  const bcl::Complex alpha(0.4, 0.3);
  const auto out = bcl::apply_family(ChannelFamily::contra_amplifier(2.0, 0.0), bcl::coherent_state(alpha, 30));
  EXPECT_LT(std::abs(bcl::mean_amplitude(out) - std::conj(alpha)), 1e-9);
  const auto g = bcl::apply_channel(bcl::contra_amp(2.0), bcl::coherent_gaussian(alpha));
  EXPECT_LT(std::abs(gaussian_amplitude(g) - std::conj(alpha)), 1e-15);
}

TEST(Dilation, ReductionsMatchKrausSets) {
  const double kappa = 1.7;
  const CVector psi = bcl::haar_vector(6, 5, 0);
  const int dim_out = 70;
  const auto d = bcl::contra_amp_dilation(kappa, psi, dim_out, 1e-9);
  const auto rho = FockDensity::pure(psi);
  EXPECT_LT(bcl::trace_distance(d.signal_out, bcl::apply_kraus(bcl::kraus_amp(kappa, 6, dim_out), rho)), 1e-12);
  EXPECT_LT(bcl::trace_distance(d.idler_out, bcl::apply_kraus(bcl::kraus_contra_amp(kappa, 6, dim_out), rho)), 1e-12);
  EXPECT_LT(d.lost_population, 1e-9);
  // Complementary outputs of a pure global state share their nonzero spectrum.
  const auto a = bcl::spectrum(d.signal_out);
  const auto b = bcl::spectrum(d.idler_out);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_THROW(bcl::contra_amp_dilation(kappa, psi, 4), bcl::InvalidParameter);
}

TEST(Dilation, TwoModeMomentsMatchCovariance) {
  const double kappa = 2.0;
  const double N = 0.7;
  const int dim = 40;
  const int dim_out = 200;
  const auto thermal = bcl::thermal_fock(N, dim);
  double signal = 0.0;
  double idler = 0.0;
  bcl::Complex corr = 0.0;
  for (int n = 0; n < dim; ++n) {
    CVector ket = CVector::Zero(dim);
    ket(n) = 1.0;
    const double p = thermal.matrix()(n, n).real();
    const auto d = bcl::contra_amp_dilation(kappa, ket, dim_out);
    signal += p * bcl::mean_photons(d.signal_out);
    idler += p * bcl::mean_photons(d.idler_out);
    bcl::CMatrix joint = bcl::CMatrix::Zero(dim_out, dim_out);
    for (int e = 0; n + e < dim_out; ++e) joint(n + e, e) = bcl::amp_amplitude(kappa, n, e);
    corr += p * joint_correlation(joint);
  }
  // Thermal truncation at 40 levels shifts the moments slightly; compare against the truncated mean.
  const double n_trunc = bcl::mean_photons(thermal);
  const auto cov = bcl::two_mode_squeezed_thermal(kappa, n_trunc).cov;
  EXPECT_NEAR(signal, 0.5 * (cov(0, 0) - 1.0), 1e-9);
  EXPECT_NEAR(idler, 0.5 * (cov(2, 2) - 1.0), 1e-9);
  EXPECT_NEAR(2.0 * corr.real(), cov(0, 2), 1e-9);
  EXPECT_NEAR(corr.imag(), 0.0, 1e-12);
}

TEST(ProductSpectrum, MatchesExplicitTwoModeAction) {
  const double kappa = 1.5;
  const int dim_in = 3;
  const int dim_out = 36;
  const CVector psi = bcl::haar_vector(dim_in * dim_in, 17, 0);
  const auto set = bcl::kraus_amp(kappa, dim_in, dim_out);
  const auto explicit_out = bcl::apply_kraus_product(set, set, FockDensity::pure(psi, 2));
  const int env = bcl::amp_environment_dim(kappa, dim_in, 1e-12);
  const auto sp = bcl::product_amp_output_spectrum(kappa, psi, env);
  EXPECT_LT(sp.lost_population, 2e-12);
  EXPECT_NEAR(bcl::entropy_of_spectrum(sp.eigenvalues), bcl::entropy(explicit_out), 1e-9);
  const auto ev = bcl::spectrum(explicit_out);
  for (std::size_t i = 0; i < 30; ++i) EXPECT_NEAR(sp.eigenvalues[i], ev[i], 1e-12);
}

TEST(ProductSpectrum, ProductVacuumIsTwiceSingleMode) {
  CVector psi = CVector::Zero(64);
  psi(0) = 1.0;
  const int env = bcl::amp_environment_dim(1.5, 8, 5e-10);
  const auto sp = bcl::product_amp_output_spectrum(1.5, psi, env);
  EXPECT_NEAR(bcl::entropy_of_spectrum(sp.eigenvalues), 2.0 * oracle::kG0p5, 1e-9);
  EXPECT_THROW(bcl::product_amp_output_spectrum(1.5, CVector::Ones(10), env), bcl::DimensionMismatch);
}

TEST(Utilities, PartialTraceAndDistance) {
  // Bell-like state (|00> + |11>) / sqrt 2 on dim 2.
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  const auto rho = FockDensity::pure(psi, 2);
  const auto reduced = bcl::partial_trace(rho, 1);
  EXPECT_NEAR(bcl::entropy(reduced), 1.0, 1e-14);
  EXPECT_NEAR(bcl::entropy(bcl::partial_trace(rho, 0)), 1.0, 1e-14);
  EXPECT_NEAR(bcl::trace_distance(bcl::fock_state(0, 3), bcl::fock_state(1, 3)), 1.0, 1e-15);
  EXPECT_THROW(bcl::trace_distance(bcl::fock_state(0, 3), bcl::fock_state(0, 4)), bcl::DimensionMismatch);
  EXPECT_THROW(bcl::partial_trace(reduced, 0), bcl::ModeMismatch);
  bcl::CMatrix skew = bcl::CMatrix::Zero(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_THROW(bcl::entropy(FockDensity(1, 2, skew)), bcl::NonHermitian);
}

TEST(Utilities, ConjugationIsTransposeForHermitian) {
  const auto rho = FockDensity::pure(bcl::haar_vector(5, 3, 1));
  EXPECT_LT((bcl::conj_fock(rho).matrix() - rho.matrix().transpose()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Sampling, DeterministicAndNormalized) {
  for (auto fam : {bcl::SampleFamily::haar, bcl::SampleFamily::fock, bcl::SampleFamily::coherent_grid,
                   bcl::SampleFamily::squeezed_grid}) {
    for (std::uint64_t i : {0u, 5u, 64u}) {
      const CVector a = bcl::sample_pure_vector(fam, 16, 9, i);
      const CVector b = bcl::sample_pure_vector(fam, 16, 9, i);
      EXPECT_EQ(a, b);
      EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    }
  }
  EXPECT_NE(bcl::haar_vector(8, 1, 0), bcl::haar_vector(8, 1, 1));
  EXPECT_NE(bcl::haar_vector(8, 1, 0), bcl::haar_vector(8, 2, 0));
  EXPECT_EQ(bcl::sample_pure_vector(bcl::SampleFamily::coherent_grid, 16, 0, 0), *bcl::fock_state(0, 16).vector());
  EXPECT_THROW(bcl::sample_pure_vector(bcl::SampleFamily::haar, 1, 0, 0), bcl::InvalidParameter);
  EXPECT_EQ(bcl::sample_pure_states(16, 1000, 0, bcl::SampleFamily::squeezed_grid).size(), 65u);
  EXPECT_EQ(bcl::sample_family_from_string(bcl::to_string(bcl::SampleFamily::squeezed_grid)),
            bcl::SampleFamily::squeezed_grid);
}

TEST(Sampling, SeedDerivation) {
  EXPECT_EQ(bcl::derive_seed(42, "conjecture"), bcl::derive_seed(42, "conjecture"));
  EXPECT_NE(bcl::derive_seed(42, "conjecture"), bcl::derive_seed(42, "spectra"));
  EXPECT_NE(bcl::derive_seed(42, "conjecture"), bcl::derive_seed(43, "conjecture"));
}
