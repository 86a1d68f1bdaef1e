#include <gtest/gtest.h>

#include <cmath>

#include "vpflab/oracle.hpp"
#include "vpflab/statmodel.hpp"
#include "vpflab/synth.hpp"

namespace vpflab {
namespace {

TEST(Rng, DeriveSeedIsOrderSensitiveAndStable) {
  EXPECT_EQ(derive_seed(7, {1, 2}), derive_seed(7, {1, 2}));
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(Rng, UniformStaysInsideOpenInterval) {
  RandomStream rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(LaplacianSample, Deterministic) {
  RandomStream a(11), b(11);
  EXPECT_EQ(laplacian_sample({0, 2500}, 1000, a),
            laplacian_sample({0, 2500}, 1000, b));
}

TEST(LaplacianSample, VarianceMatches) {
  RandomStream rng(5);
  const auto x = laplacian_sample({0, 2500}, std::size_t{1} << 20, rng);
  EXPECT_NEAR(sample_variance(x), 2500, 0.02 * 2500);
  EXPECT_NEAR(sample_mean(x), 0, 0.5);
}

TEST(LaplacianSample, LocationShift) {
  RandomStream a(9), b(9);
  const auto x0 = laplacian_sample({0, 100}, 500, a);
  const auto x7 = laplacian_sample({7, 100}, 500, b);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    EXPECT_DOUBLE_EQ(x7[i], x0[i] + 7);
  }
}

TEST(GaussianSample, DeterministicAndVariance) {
  RandomStream a(13), b(13);
  const auto x = gaussian_sample(0, 10, std::size_t{1} << 20, a);
  EXPECT_EQ(x, gaussian_sample(0, 10, std::size_t{1} << 20, b));
  EXPECT_NEAR(sample_variance(x), 10, 0.2);
}

TEST(GaussianSample, ScaleFamily) {
  RandomStream a(21), b(21);
  const auto x1 = gaussian_sample(3, 1, 1000, a);
  const auto x4 = gaussian_sample(3, 4, 1000, b);
  for (std::size_t i = 0; i < x1.size(); ++i) {
    EXPECT_NEAR(x4[i] - 3, 2 * (x1[i] - 3), 1e-12);
  }
}

TEST(Samplers, RejectBadParameters) {
  RandomStream rng(1);
  EXPECT_THROW(laplacian_sample({0, 0}, 10, rng), std::domain_error);
  EXPECT_THROW(laplacian_sample({0, 1}, 0, rng), std::domain_error);
  EXPECT_THROW(gaussian_sample(0, -1, 10, rng), std::domain_error);
}

TEST(MbProbability, FirstPass) {
  EXPECT_NEAR(p_pmb_first(31), 0.15 + 0.7 * std::exp(-9.0), 1e-15);
  EXPECT_NEAR(p_pmb_first(31), 0.1500864, 5e-8);
  EXPECT_DOUBLE_EQ(detail::p_pmb_first_formula(0, 31), 0.85);
  EXPECT_GT(p_pmb_first(2), p_pmb_first(16));
  EXPECT_GT(p_pmb_first(16), p_pmb_first(31));
  EXPECT_THROW(p_pmb_first(1), std::domain_error);
  EXPECT_THROW(p_pmb_first(32), std::domain_error);
  EXPECT_THROW(p_pmb_first(8, MBProbModel{30}), std::domain_error);
}

TEST(MbProbability, SecondPass) {
  const double p1 = p_pmb_first(2);
  EXPECT_NEAR(p_pmb_second(2, 31), 0.15 + (p1 - 0.15) * std::exp(-9.0),
              1e-15);
  for (int q1 = kMinQ; q1 <= kMaxQ; ++q1) {
    double prev = 1.0;
    for (int q2 = kMinQ; q2 <= kMaxQ; ++q2) {
      const double p2 = p_pmb_second(q1, q2);
      EXPECT_LT(p2, p_pmb_first(q1));
      EXPECT_GT(p2, 0.15);
      EXPECT_LE(p_pmb_first(q1), 0.85);
      EXPECT_LT(p2, prev);
      prev = p2;
    }
  }
  EXPECT_THROW(p_pmb_second(8, 40), std::domain_error);
}

TEST(Distortion, HugeStepReturnsVariance) {
  EXPECT_NEAR(distortion_intra(1e6, 2, {0, 2500}), 2500, 2500e-6);
  EXPECT_NEAR(distortion_inter(1e6, 2, {0, 100}), 100, 100e-6);
}

TEST(Distortion, WiderDeadzoneCostsMore) {
  EXPECT_GE(distortion_intra(16, 2, {0, 2500}),
            distortion_intra(16, 1, {0, 2500}));
}

TEST(Distortion, NonNegativeAndNondecreasingInStep) {
  for (double sigma2 : {400.0, 2500.0}) {
    for (double alpha : {1.0, 1.25, 2.0}) {
      double prev_i = 0, prev_p = 0;
      for (int q = kMinQ; q <= kMaxQ; ++q) {
        const double di = distortion_intra(2.0 * q, alpha, {0, sigma2});
        const double dp = distortion_inter(2.0 * q, alpha, {0, sigma2});
        EXPECT_GE(di, prev_i);
        EXPECT_GE(dp, prev_p);
        prev_i = di;
        prev_p = dp;
      }
    }
  }
  for (int q = kMinQ; q <= kMaxQ; ++q) {
    for (double alpha : {1.0, 1.25, 2.0}) {
      EXPECT_GE(distortion_intra(2.0 * q, alpha, {0, 100}), 0);
      EXPECT_GE(distortion_inter(2.0 * q, alpha, {0, 100}), 0);
    }
  }
}

TEST(Distortion, InterOvershootsVarianceForLargeSteps) {
  // Mass outside the deadzone is rebuilt at 1.5 delta, so the inter error
  // exceeds sigma2 and falls back towards it as delta grows.
  const double d50 = distortion_inter(50, 1, {0, 100});
  const double d62 = distortion_inter(62, 1, {0, 100});
  EXPECT_GT(d50, 100);
  EXPECT_GT(d50, d62);
  EXPECT_GT(d62, 100);
}

TEST(Distortion, MatchesMonteCarloAtSpecPoints) {
  const double di = distortion_intra(16, 1.25, {0, 2500});
  const auto mi = oracle::mc_distortion(16, 1.25, true, 2500, 10'000'000, 1);
  EXPECT_LE(std::fabs(di - mi.mean), 3 * mi.std_error);

  const double dp = distortion_inter(8, 2, {0, 100});
  const auto mp = oracle::mc_distortion(8, 2, false, 100, 10'000'000, 2);
  EXPECT_LE(std::fabs(dp - mp.mean), 3 * mp.std_error);
}

TEST(Distortion, NonZeroMeanMatchesMonteCarlo) {
  // Shifted source against a direct sample average.
  const LaplacianParams src{7.5, 400};
  const DeadzoneQuantizer quant(12, 1.5, QuantMode::Intra);
  RandomStream rng(77);
  const auto x = laplacian_sample(src, 2'000'000, rng);
  long double sum = 0, sum2 = 0;
  for (double v : x) {
    const double e = quant.requantize(v) - v;
    sum += e * e;
    sum2 += static_cast<long double>(e * e) * (e * e);
  }
  const double n = static_cast<double>(x.size());
  const double mean = static_cast<double>(sum / n);
  const double se =
      std::sqrt(static_cast<double>(sum2 / n - (sum / n) * (sum / n)) / n);
  EXPECT_LE(std::fabs(distortion(quant, src) - mean), 3 * se);
}

TEST(Distortion, TruncationFailureIsExplicit) {
  TruncationPolicy tight{1e-10, 3};
  EXPECT_THROW(distortion_intra(4, 1, {0, 2500}, tight), TruncationError);
  EXPECT_THROW(distortion_intra(4, 1, {0, 2500}, {0, 10}), std::domain_error);
  EXPECT_THROW(distortion_intra(4, 1, {0, 2500}, {1.0, 10}),
               std::domain_error);
}

}  // namespace
}  // namespace vpflab
