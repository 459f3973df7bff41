// Copyright 2026 The dphealth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dphealth/dp/accountant.hpp"
#include "dphealth/dp/mechanism.hpp"
#include "dphealth/dp/sensitivity.hpp"
#include "dphealth/random.hpp"
#include "test_support.hpp"

namespace dphealth::dp {
namespace {

using testing::KsCritical;
using testing::KsStatistic;
using testing::LaplaceCdf;
using testing::NormalCdf;

TEST(LaplaceScaleTest, QuotientOfSensitivityAndEpsilon) {
  EXPECT_NEAR(LaplaceScale(6.47, 5.0), 1.294, 1e-12);
  EXPECT_EQ(LaplaceScale(0.0, 1.0), 0.0);
  EXPECT_EQ(LaplaceScale(1.0, 1.0), 1.0);
}

TEST(LaplaceScaleTest, RejectsNonPositiveEpsilon) {
  for (double eps : {0.0, -1.0, std::nan("")}) {
    try {
      LaplaceScale(1.0, eps);
      FAIL() << "accepted epsilon " << eps;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidParams);
    }
  }
}

TEST(GaussianSigmaTest, MatchesLongDoubleClosedForm) {
  struct Case {
    double sens, eps, delta, frozen;
  };
  // Frozen values from an mpmath evaluation of the closed form.
  const Case cases[] = {{6.47, 5.0, 1e-5, 6.269178009811373},
                        {1.0, 1.0, 1e-5, 4.844805262605389},
                        {2.5, 0.5, 1e-3, 18.882397663295233}};
  for (const auto& c : cases) {
    const long double oracle =
        static_cast<long double>(c.sens) *
        std::sqrt(2.0L * std::log(1.25L / static_cast<long double>(c.delta))) /
        static_cast<long double>(c.eps);
    const double got = GaussianSigma(c.sens, c.eps, c.delta);
    EXPECT_NEAR(got, static_cast<double>(oracle), 1e-12 * got);
    EXPECT_NEAR(got, c.frozen, 1e-8);
  }
  EXPECT_EQ(GaussianSigma(0.0, 1.0, 1e-5), 0.0);
}

TEST(GaussianSigmaTest, RejectsOutOfRangeParams) {
  EXPECT_THROW(GaussianSigma(1.0, 0.0, 1e-5), Error);
  EXPECT_THROW(GaussianSigma(1.0, 1.0, 0.0), Error);
  EXPECT_THROW(GaussianSigma(1.0, 1.0, 1.0), Error);
  EXPECT_THROW(GaussianSigma(-1.0, 1.0, 1e-5), Error);
}

TEST(MechanismSpecTest, NamesRoundTrip) {
  for (auto kind : {MechanismKind::kLaplace, MechanismKind::kGaussian,
                    MechanismKind::kHybridWeighted, MechanismKind::kHybridSplit}) {
    EXPECT_EQ(ParseMechanism(MechanismName(kind)), kind);
  }
  EXPECT_THROW(ParseMechanism("exponential"), Error);
}

TEST(MechanismSpecTest, ValidationRejectsBadParams) {
  EXPECT_THROW(MechanismSpec::Laplace(0.0, 1.0), Error);
  EXPECT_THROW(MechanismSpec::Laplace(1.0, -1.0), Error);
  EXPECT_THROW(MechanismSpec::Gaussian(1.0, 0.0, 1.0), Error);
  EXPECT_THROW(MechanismSpec::HybridWeighted(1.0, 1e-5, 1.0, 1.5), Error);
  EXPECT_THROW(MechanismSpec::HybridSplit(1.0, 1.0, 0.0), Error);
  // alpha = 1 has no Gaussian part, so delta may be zero.
  EXPECT_NO_THROW(MechanismSpec::HybridWeighted(1.0, 0.0, 1.0, 1.0));
}

TEST(MechanismSpecTest, SplitChargesWholeBudget) {
  const auto spec = MechanismSpec::HybridSplit(3.0, 1.0, 0.3);
  EXPECT_NEAR(spec.epsilon_laplace, 0.9, 1e-15);
  EXPECT_NEAR(spec.epsilon_gaussian, 2.1, 1e-15);
  EXPECT_DOUBLE_EQ(spec.EpsilonCharge(), 3.0);
}

// Settings shared by the moment and distribution checks.
std::vector<MechanismSpec> SamplerSettings() {
  return {MechanismSpec::Laplace(5.0, 6.47),
          MechanismSpec::Laplace(0.5, 1.0),
          MechanismSpec::Gaussian(5.0, 1e-5, 6.47),
          MechanismSpec::Gaussian(1.0, 1e-3, 2.0),
          MechanismSpec::HybridWeighted(5.0, 1e-5, 6.47, 0.5),
          MechanismSpec::HybridWeighted(1.0, 1e-5, 1.0, 0.3),
          MechanismSpec::HybridSplit(5.0, 6.47, 0.5),
          MechanismSpec::HybridSplit(2.0, 1.0, 0.25)};
}

double OracleVariance(const MechanismSpec& s) {
  const double d = s.params.sensitivity;
  const double eps = s.params.epsilon;
  const double b = d / eps;
  const double sigma =
      s.params.delta > 0.0 ? d * std::sqrt(2.0 * std::log(1.25 / s.params.delta)) / eps
                           : 0.0;
  switch (s.kind) {
    case MechanismKind::kLaplace: return 2.0 * b * b;
    case MechanismKind::kGaussian: return sigma * sigma;
    case MechanismKind::kHybridWeighted:
      return s.alpha * s.alpha * 2.0 * b * b +
             (1.0 - s.alpha) * (1.0 - s.alpha) * sigma * sigma;
    case MechanismKind::kHybridSplit: {
      const double bl = d / s.epsilon_laplace;
      const double sg = d / s.epsilon_gaussian;
      return 2.0 * bl * bl + sg * sg;
    }
  }
  return 0.0;
}

TEST(SampleNoiseTest, ClosedFormVarianceMatchesOracle) {
  for (const auto& spec : SamplerSettings()) {
    EXPECT_NEAR(spec.NoiseVariance(), OracleVariance(spec),
                1e-12 * OracleVariance(spec))
        << spec.Describe();
  }
}

TEST(SampleNoiseTest, EmpiricalMomentsMatchClosedForm) {
  constexpr std::size_t kDraws = 200000;
  for (const auto& spec : SamplerSettings()) {
    Rng rng(11);
    const Vector v = SampleNoise(spec, kDraws, rng);
    const double var = OracleVariance(spec);
    const double mean = v.mean();
    const double sample_var = (v.array() - mean).square().sum() / (kDraws - 1);
    // Five standard errors of the mean; 3% on the variance (heavy Laplace
    // tails make the variance estimator noisier than the Gaussian case).
    EXPECT_LT(std::abs(mean), 5.0 * std::sqrt(var / kDraws)) << spec.Describe();
    EXPECT_NEAR(sample_var / var, 1.0, 0.03) << spec.Describe();
  }
}

TEST(SampleNoiseTest, LaplaceAndGaussianPassKs) {
  constexpr std::size_t kDraws = 50000;
  Rng rng(7);
  const auto lap = MechanismSpec::Laplace(5.0, 6.47);
  const Vector l = SampleNoise(lap, kDraws, rng);
  const double b = 6.47 / 5.0;
  EXPECT_LT(KsStatistic({l.data(), l.data() + l.size()},
                        [b](double x) { return LaplaceCdf(x, b); }),
            KsCritical(kDraws));

  const auto gau = MechanismSpec::Gaussian(5.0, 1e-5, 6.47);
  const Vector g = SampleNoise(gau, kDraws, rng);
  const double sigma = 6.269178009811373;
  EXPECT_LT(KsStatistic({g.data(), g.data() + g.size()},
                        [sigma](double x) { return NormalCdf(x, sigma); }),
            KsCritical(kDraws));
}

TEST(SampleNoiseTest, HybridSplitMatchesConvolutionByMonteCarloKs) {
  // Oracle: the split hybrid is an independent Laplace plus Gaussian sum;
  // its CDF is estimated by numerically integrating the Laplace density
  // against the Gaussian CDF.
  const auto spec = MechanismSpec::HybridSplit(2.0, 1.0, 0.5);
  const double b = 1.0;
  const double s = 1.0;
  auto cdf = [&](double x) {
    double acc = 0.0;
    const double h = 0.005;
    for (double u = -40.0; u <= 40.0; u += h) {
      acc += 0.5 / b * std::exp(-std::abs(u) / b) * NormalCdf(x - u, s) * h;
    }
    return acc;
  };
  constexpr std::size_t kDraws = 4000;
  Rng rng(5);
  const Vector v = SampleNoise(spec, kDraws, rng);
  EXPECT_LT(KsStatistic({v.data(), v.data() + v.size()}, cdf), KsCritical(kDraws));
}

TEST(SampleNoiseTest, SameSeedSameNoise) {
  for (const auto& spec : SamplerSettings()) {
    Rng a(99), b(99);
    EXPECT_EQ(SampleNoise(spec, 64, a), SampleNoise(spec, 64, b));
  }
}

TEST(PerturbMatrixTest, ZeroSensitivityIsIdentity) {
  Rng rng(1);
  const FeatureMatrix m = FeatureMatrix::Random(7, 4);
  const auto spec = MechanismSpec::Laplace(1.0, 0.0);
  EXPECT_EQ(PerturbMatrix(m, spec, rng), m);
}

TEST(PerturbMatrixTest, DifferencesFollowLaplace) {
  // 834 x 23 mirrors the balanced training matrix.
  const FeatureMatrix m = FeatureMatrix::Zero(834, 23);
  Rng rng(3);
  const auto spec = MechanismSpec::Laplace(10.0, 6.47);
  const FeatureMatrix p = PerturbMatrix(m, spec, rng);
  EXPECT_TRUE((p.array() != 0.0).all());
  std::vector<double> diffs(p.data(), p.data() + p.size());
  EXPECT_LT(KsStatistic(diffs, [](double x) { return LaplaceCdf(x, 0.647); }),
            KsCritical(diffs.size()));

  Rng again(3);
  EXPECT_EQ(PerturbMatrix(m, spec, again), p);
}

TEST(SensitivityTest, NearestRankQuantileMatchesSortedOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + rng.UniformInt(40));
    for (auto& x : v) x = rng.Uniform(-5, 5);
    const double q = rng.Uniform(0.01, 1.0);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    // Smallest value with at least q * n values at or below it.
    double oracle = sorted.back();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (static_cast<double>(i + 1) >= q * static_cast<double>(sorted.size())) {
        oracle = sorted[i];
        break;
      }
    }
    EXPECT_EQ(NearestRankQuantile(v, q), oracle);
  }
}

TEST(SensitivityTest, ToyNormsAtFullPercentile) {
  FeatureMatrix m(3, 2);
  m << 3, 0, 0, 4, 3, 4;
  const auto r = ComputeSensitivity(m, 1.0);
  EXPECT_DOUBLE_EQ(r.delta, 5.0);
  EXPECT_EQ(r.clipped, m);
}

TEST(SensitivityTest, ZeroMatrixGivesZeroBound) {
  const FeatureMatrix m = FeatureMatrix::Zero(10, 5);
  const auto r = ComputeSensitivity(m, 0.95);
  EXPECT_EQ(r.delta, 0.0);
  EXPECT_EQ(r.clipped, m);
}

TEST(SensitivityTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(ComputeSensitivity(FeatureMatrix(0, 3), 0.95), Error);
  FeatureMatrix m = FeatureMatrix::Ones(2, 2);
  m(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ComputeSensitivity(m, 0.95), Error);
}

TEST(ClipRowsTest, ProjectsOntoBallAndIsIdempotent) {
  Rng rng(4);
  FeatureMatrix m(200, 6);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal(0, 3);
  const double bound = 4.0;
  const FeatureMatrix c = ClipRows(m, bound);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    EXPECT_LE(c.row(i).norm(), bound * (1 + 1e-12));
    if (n <= bound) {
      EXPECT_EQ(c.row(i), m.row(i));
    } else {
      // Direction preserved.
      EXPECT_NEAR(c.row(i).dot(m.row(i)) / (c.row(i).norm() * n), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(ClipRows(c, bound), c);
}

TEST(ClipRowsTest, WorksForFloat) {
  MatrixX<float> m(1, 2);
  m << 3.0f, 4.0f;
  const MatrixX<float> c = ClipRows(m, 1.0f);
  EXPECT_NEAR(c(0, 0), 0.6f, 1e-6f);
  EXPECT_NEAR(c(0, 1), 0.8f, 1e-6f);
}

TEST(AccountantTest, SequentialComposition) {
  BudgetAccountant acc(10.0);
  acc.Charge("q1", 3.0);
  acc.Charge("q2", 3.0);
  acc.Charge("q3", 3.0);
  EXPECT_DOUBLE_EQ(acc.spent(), 9.0);
  EXPECT_EQ(acc.entries().size(), 3u);
  try {
    acc.Charge("q4", 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExhausted);
  }
  EXPECT_DOUBLE_EQ(acc.spent(), 9.0);
  EXPECT_EQ(acc.entries().size(), 3u);
  EXPECT_TRUE(acc.CanCharge(1.0));
}

TEST(AccountantTest, SpentNeverExceedsTotal) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    BudgetAccountant acc(rng.Uniform(1, 20));
    for (int k = 0; k < 30; ++k) {
      const double eps = rng.Uniform(0.01, 3.0);
      const bool fits = acc.CanCharge(eps);
      if (fits) {
        acc.Charge("q", eps);
      } else {
        EXPECT_THROW(acc.Charge("q", eps), Error);
      }
      EXPECT_LE(acc.spent(), acc.total());
    }
  }
}

TEST(AccountantTest, MechanismChargeUsesFullEpsilon) {
  BudgetAccountant acc(10.0);
  acc.Charge("split", MechanismSpec::HybridSplit(4.0, 1.0, 0.25));
  EXPECT_DOUBLE_EQ(acc.spent(), 4.0);
}

}  // namespace
}  // namespace dphealth::dp
