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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "dphealth/ml/dataset.hpp"
#include "dphealth/ml/experiment.hpp"
#include "dphealth/ml/forest.hpp"
#include "dphealth/ml/kmeans.hpp"
#include "dphealth/ml/logistic.hpp"
#include "dphealth/ml/model.hpp"
#include "dphealth/ml/naive_bayes.hpp"
#include "test_support.hpp"

namespace dphealth::ml {
namespace {

using testing::CodeOf;

// Two Gaussian blobs in two dimensions, labels by blob.
Dataset Blobs(Eigen::Index n, double gap, std::uint64_t seed) {
  Rng rng(seed);
  Dataset d;
  d.features.resize(n, 2);
  d.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = i % 2;
    d.labels(i) = y;
    d.features(i, 0) = rng.Normal(y ? gap : -gap, 1.0);
    d.features(i, 1) = rng.Normal(y ? gap : -gap, 1.0);
  }
  return d;
}

double Accuracy(const LabelVector& a, const LabelVector& b) {
  return static_cast<double>((a.array() == b.array()).count()) / a.size();
}

TEST(CsvTest, ParsesLabelAndExcludesColumns) {
  const Dataset d = ParseCsv("pidnum,age,cid,cd40\n1,30,0,400\n2,41,1,250\n", {});
  EXPECT_EQ(d.rows(), 2);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"age", "cd40"}));
  EXPECT_EQ(d.labels, (LabelVector(2) << 0, 1).finished());
  EXPECT_EQ(d.features(1, 1), 250.0);
}

TEST(CsvTest, IngestErrors) {
  EXPECT_EQ(CodeOf([] { ParseCsv("age,cid\nold,1\n", {}); }), ErrorCode::kIngestError);
  EXPECT_EQ(CodeOf([] { ParseCsv("age,cid\n1,2\n", {}); }), ErrorCode::kIngestError);
  EXPECT_EQ(CodeOf([] { ParseCsv("age,label\n1,1\n", {}); }), ErrorCode::kIngestError);
  EXPECT_EQ(CodeOf([] { ParseCsv("age,cid\n1\n", {}); }), ErrorCode::kIngestError);
  EXPECT_EQ(CodeOf([] { ParseCsv("", {}); }), ErrorCode::kIngestError);
}

TEST(CsvTest, WriteThenReadRoundTrips) {
  const Dataset d = GenerateSynthetic({40, 10, 3});
  const auto path = std::filesystem::temp_directory_path() / "dphealth_csv_rt.csv";
  WriteCsv(d, "cid", path.string());
  const Dataset back = ReadCsv(path.string(), {});
  std::filesystem::remove(path);
  EXPECT_EQ(back.feature_names, d.feature_names);
  EXPECT_EQ(back.labels, d.labels);
  EXPECT_EQ(back.features, d.features);
}

TEST(StandardizeTest, ConstantAndTwoPointColumns) {
  FeatureMatrix m(2, 2);
  m << 5, 0, 5, 2;
  const FeatureMatrix s = Standardize(m);
  EXPECT_EQ(s.col(0), Vector::Zero(2));
  // Sample standard deviation of {0, 2} is sqrt(2).
  EXPECT_NEAR(s(0, 1), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s(1, 1), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(StandardizeTest, ZeroMeanUnitVariance) {
  const Dataset d = Preprocess(GenerateSynthetic());
  EXPECT_EQ(d.cols(), 23);
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    const auto col = d.features.col(j);
    EXPECT_NEAR(col.mean(), 0.0, 1e-12);
    const double ss = (col.array() - col.mean()).square().sum();
    if (ss > 0) EXPECT_NEAR(ss / (d.rows() - 1), 1.0, 1e-12);
  }
}

TEST(SyntheticTest, ShapeMatchesStudyExtract) {
  const Dataset d = GenerateSynthetic();
  EXPECT_EQ(d.rows(), 2139);
  EXPECT_EQ(d.cols(), 23);
  EXPECT_EQ(d.CountLabel(1), 521);
  EXPECT_NO_THROW(d.FeatureIndex("cd40"));
  EXPECT_EQ(GenerateSynthetic().features, d.features);
}

TEST(SplitTest, StudySizedSplit) {
  const Dataset d = Preprocess(GenerateSynthetic());
  const auto split = SplitAndBalance(d, {0.2, true, true, 42});
  EXPECT_EQ(split.test.rows(), 428);
  EXPECT_EQ(split.test.CountLabel(1), 104);
  EXPECT_EQ(split.train.CountLabel(0), 417);
  EXPECT_EQ(split.train.CountLabel(1), 417);
  EXPECT_EQ(split.train.rows(), 834);
}

TEST(SplitTest, TinyBalancedSet) {
  Dataset d;
  d.features = FeatureMatrix::Random(10, 2);
  d.labels = (LabelVector(10) << 0, 1, 0, 1, 0, 1, 0, 1, 0, 1).finished();
  const auto split = SplitAndBalance(d, {0.2, true, true, 1});
  EXPECT_EQ(split.test.rows(), 2);
  EXPECT_EQ(split.test.CountLabel(1), 1);
}

TEST(SplitTest, TrainAndTestAreDisjointAndCoverClasses) {
  Dataset d = GenerateSynthetic({300, 60, 9});
  // Tag rows through an extra unique column to trace them across the split.
  d.features.conservativeResize(Eigen::NoChange, d.cols() + 1);
  d.features.col(d.cols() - 1) = Vector::LinSpaced(d.rows(), 0, d.rows() - 1);
  d.feature_names.push_back("row");
  const auto split = SplitAndBalance(d, {0.2, true, true, 5});
  std::vector<double> train(split.train.features.col(23).data(),
                            split.train.features.col(23).data() + split.train.rows());
  std::vector<double> test(split.test.features.col(23).data(),
                           split.test.features.col(23).data() + split.test.rows());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  std::vector<double> both;
  std::set_intersection(train.begin(), train.end(), test.begin(), test.end(),
                        std::back_inserter(both));
  EXPECT_TRUE(both.empty());
}

TEST(SplitTest, MissingClassIsSplitError) {
  Dataset d;
  d.features = FeatureMatrix::Random(10, 2);
  d.labels = LabelVector::Zero(10);
  EXPECT_EQ(CodeOf([&] { SplitAndBalance(d, {}); }), ErrorCode::kSplitError);
}

TEST(LogisticTest, SeparableDataFitsPerfectly) {
  const Dataset d = Blobs(200, 4.0, 1);
  const auto model = TrainLogistic(d.features, d.labels, {});
  const LabelVector pred = (model.PredictProba(d.features).array() > 0.5).cast<int>();
  EXPECT_EQ(Accuracy(pred, d.labels), 1.0);
}

TEST(LogisticTest, GradientVanishesAtOptimum) {
  // Oracle: the stationarity condition of the stated objective.
  const Dataset d = Blobs(100, 0.5, 2);
  LogisticParams p;
  p.max_iters = 20000;
  p.learning_rate = 0.5;
  const auto m = TrainLogistic(d.features, d.labels, p);
  const Vector r = m.PredictProba(d.features) - d.labels.cast<double>();
  const double n = static_cast<double>(d.rows());
  const Vector grad_w = d.features.transpose() * r / n + m.weights / (p.inverse_l2 * n);
  EXPECT_LT(grad_w.norm(), 1e-6);
  EXPECT_LT(std::abs(r.sum() / n), 1e-6);
}

TEST(LogisticTest, ErrorsAndDegenerateInputs) {
  const Dataset d = Blobs(20, 1.0, 3);
  EXPECT_EQ(CodeOf([&] { TrainLogistic(d.features, LabelVector::Zero(20), {}); }),
            ErrorCode::kTrainError);
  LogisticParams huge;
  huge.learning_rate = 1e308;
  EXPECT_EQ(CodeOf([&] { TrainLogistic(d.features * 1e10, d.labels, huge); }),
            ErrorCode::kTrainError);
  Rng rng(1);
  EXPECT_EQ(CodeOf([&] { DpLogisticRegression(d.features, d.labels, 0.0, 1.0, {}, rng); }),
            ErrorCode::kInvalidParams);
}

TEST(DpLogisticTest, ZeroIterationsGiveZeroWeights) {
  const Dataset d = Blobs(20, 1.0, 4);
  LogisticParams p;
  p.max_iters = 0;
  Rng rng(1);
  const auto m = DpLogisticRegression(d.features, d.labels, 1.0, 1.0, p, rng);
  EXPECT_EQ(m.weights, Vector::Zero(2));
  EXPECT_EQ(m.intercept, 0.0);
}

TEST(DpLogisticTest, GradientBound) {
  EXPECT_DOUBLE_EQ(GradientL1Bound(2.0, 4), 2.0 * 2.0 + 1.0);
}

TEST(DpLogisticTest, ModerateEpsilonStillSeparates) {
  const Dataset train = Blobs(400, 3.0, 5);
  const Dataset test = Blobs(400, 3.0, 6);
  double total = 0.0;
  for (int s = 0; s < 20; ++s) {
    Rng rng(DeriveSeed(77, s));
    const auto m = DpLogisticRegression(train.features, train.labels, 50.0, 8.0, {}, rng);
    const LabelVector pred = (m.PredictProba(test.features).array() > 0.5).cast<int>();
    total += Accuracy(pred, test.labels);
  }
  EXPECT_GE(total / 20.0, 0.9);
}

TEST(ForestTest, StructureInvariants) {
  const Dataset d = Preprocess(GenerateSynthetic({400, 100, 2}));
  ForestParams p;
  p.trees = 15;
  Rng rng(3);
  const auto f = TrainForest(d.features, d.labels, p, rng);
  ASSERT_EQ(f.trees.size(), 15u);
  for (const auto& t : f.trees) {
    int depth_ok = 1;
    // Breadth walk checking depth and leaf sizes.
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [i, depth] = stack.back();
      stack.pop_back();
      const auto& node = t.nodes[static_cast<std::size_t>(i)];
      if (depth > p.max_depth) depth_ok = 0;
      EXPECT_GE(node.value, 0.0);
      EXPECT_LE(node.value, 1.0);
      if (node.is_leaf()) {
        EXPECT_GE(node.samples, p.min_samples_leaf);
      } else {
        EXPECT_EQ(t.nodes[static_cast<std::size_t>(node.left)].samples +
                      t.nodes[static_cast<std::size_t>(node.right)].samples,
                  node.samples);
        stack.push_back({node.left, depth + 1});
        stack.push_back({node.right, depth + 1});
      }
    }
    EXPECT_TRUE(depth_ok);
  }
}

TEST(ForestTest, SplitsAreGiniOptimalOnOneFeature) {
  // Oracle: brute-force Gini over every threshold of a single feature.
  FeatureMatrix x(8, 1);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  LabelVector y(8);
  y << 0, 0, 1, 0, 1, 1, 1, 1;
  ForestParams p;
  p.trees = 1;
  p.max_depth = 1;
  p.min_samples_split = 2;
  p.min_samples_leaf = 1;
  p.bootstrap = false;
  Rng rng(1);
  const auto f = TrainForest(x, y, p, rng);
  double best = 1e9, best_t = 0;
  for (int k = 1; k < 8; ++k) {
    auto gini = [](int pos, int n) {
      const double q = static_cast<double>(pos) / n;
      return n * 2 * q * (1 - q);
    };
    int lp = 0;
    for (int i = 0; i < k; ++i) lp += y(i);
    const double g = gini(lp, k) + gini(y.sum() - lp, 8 - k);
    if (g < best) {
      best = g;
      best_t = k + 0.5;
    }
  }
  EXPECT_EQ(f.trees[0].nodes[0].threshold, best_t);
}

TEST(ForestTest, PerturbLeavesKeepsValuesInRange) {
  const Dataset d = Blobs(200, 1.0, 8);
  ForestParams p;
  p.trees = 5;
  Rng rng(2);
  auto f = TrainForest(d.features, d.labels, p, rng);
  PerturbLeaves(f, 2.0, rng);
  bool any_clamped = false;
  for (const auto& t : f.trees) {
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) continue;
      EXPECT_EQ(n.value, std::clamp(n.raw_value, 0.0, 1.0));
      any_clamped |= n.value != n.raw_value;
    }
  }
  EXPECT_TRUE(any_clamped);
}

TEST(ForestTest, SameSeedSameNoisyForest) {
  const Dataset d = Blobs(100, 1.0, 9);
  ForestParams p;
  p.trees = 4;
  Rng a(5), b(5);
  const auto fa = DpRandomForest(d.features, d.labels, 1.0, 1.0, p, a);
  const auto fb = DpRandomForest(d.features, d.labels, 1.0, 1.0, p, b);
  EXPECT_EQ(fa.PredictProba(d.features), fb.PredictProba(d.features));
}

TEST(ClusterMapTest, IdentityAndSwap) {
  const LabelVector labels = (LabelVector(4) << 0, 0, 1, 1).finished();
  EXPECT_EQ(MapClustersToClasses({0, 0, 1, 1}, labels, 2), (std::vector<int>{0, 1}));
  EXPECT_EQ(MapClustersToClasses({1, 1, 0, 0}, labels, 2), (std::vector<int>{1, 0}));
}

TEST(ClusterMapTest, MatchesExhaustiveSearchOnThreeClusters) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> a(60);
    LabelVector l(60);
    for (int i = 0; i < 60; ++i) {
      a[i] = static_cast<int>(rng.UniformInt(3));
      l(i) = static_cast<int>(rng.UniformInt(3));
    }
    const auto map = MapClustersToClasses(a, l, 3);
    auto agree = [&](const std::vector<int>& m) {
      int s = 0;
      for (int i = 0; i < 60; ++i) s += m[a[i]] == l(i);
      return s;
    };
    std::vector<int> perm{0, 1, 2};
    int best = 0;
    do best = std::max(best, agree(perm));
    while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(agree(map), best);
    std::vector<int> sorted = map;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2}));
  }
}

TEST(ClusterMapTest, RejectsLargeK) {
  EXPECT_EQ(CodeOf([] { MapClustersToClasses({}, LabelVector(0), 9); }),
            ErrorCode::kUnsupported);
}

TEST(DpKMeansTest, OneIterationOnePointPerCluster) {
  // Each centroid is its own point plus Lap(sensitivity / (1 * epsilon)).
  FeatureMatrix x(2, 1);
  x << -10, 10;
  KMeansParams p{2, 1};
  const double eps = 2.0;
  std::vector<double> noise;
  for (int s = 0; s < 2000; ++s) {
    Rng rng(DeriveSeed(3, s));
    const auto c = RunDpKMeans(x, p, eps, 1.0, rng);
    for (Eigen::Index k = 0; k < 2; ++k) {
      const double v = c.centroids(k, 0);
      noise.push_back(v - (v < 0 ? -10.0 : 10.0));
    }
  }
  EXPECT_LT(testing::KsStatistic(noise, [eps](double v) {
              return testing::LaplaceCdf(v, 1.0 / eps);
            }),
            testing::KsCritical(noise.size()));
}

TEST(DpKMeansTest, SeparatedBlobsAreRecovered) {
  const Dataset d = Blobs(400, 4.0, 13);
  KMeansParams p{2, 10};
  double total = 0.0;
  for (int s = 0; s < 20; ++s) {
    Rng rng(DeriveSeed(3, s));
    const auto m = DpKMeans(d.features, d.labels, p, 10.0, 1.0, rng);
    total += Accuracy(m.Predict(d.features), d.labels);
  }
  EXPECT_GE(total / 20.0, 0.95);
}

TEST(NaiveBayesTest, GaussianMatchesClosedForm) {
  FeatureMatrix x(4, 1);
  x << 0, 2, 10, 14;
  const LabelVector y = (LabelVector(4) << 0, 0, 1, 1).finished();
  const auto m = TrainNaiveBayes(x, y, {});
  EXPECT_DOUBLE_EQ(m.means(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.variances(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.means(1, 0), 12.0);
  EXPECT_DOUBLE_EQ(m.variances(1, 0), 4.0);
  // Posterior at x = 6 by hand: equal priors, N(6; 1, 1) vs N(6; 12, 4).
  FeatureMatrix q(1, 1);
  q << 6.0;
  const double l0 = -0.5 * std::log(1.0) - 0.5 * 25.0;
  const double l1 = -0.5 * std::log(4.0) - 0.5 * 36.0 / 4.0;
  EXPECT_NEAR(m.PredictProba(q)(0), 1.0 / (1.0 + std::exp(l0 - l1)), 1e-12);
}

TEST(NaiveBayesTest, VarianceFloorHolds) {
  FeatureMatrix x(4, 1);
  x << 1, 1, 2, 2;
  const LabelVector y = (LabelVector(4) << 0, 0, 1, 1).finished();
  NaiveBayesParams p;
  p.variance_floor = 1e-3;
  const auto m = TrainNaiveBayes(x, y, p);
  EXPECT_TRUE((m.variances.array() >= 1e-3).all());
}

TEST(NaiveBayesTest, SingleClassDpGivesUnitPrior) {
  const FeatureMatrix x = FeatureMatrix::Random(30, 3);
  for (int s = 0; s < 10; ++s) {
    Rng rng(s);
    const auto m = DpNaiveBayes(x, LabelVector::Ones(30), 0.1, {}, rng);
    EXPECT_EQ(m.priors[1], 1.0);
    EXPECT_EQ(m.priors[0], 0.0);
    EXPECT_TRUE((m.PredictProba(x).array() == 1.0).all());
  }
}

TEST(NaiveBayesTest, BinaryTableCountsFollowLaplace) {
  // Oracle: each perturbed statistic is the exact one plus Lap(1 / epsilon).
  // With 5 rows per class and b = 0.5 the floor at one is out of reach. The
  // Gaussian likelihood keeps per-feature sums unclamped, and on a 0/1 table
  // those sums are counts.
  FeatureMatrix x(10, 2);
  x << 1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 1, 0, 0, 0, 1, 1;
  const LabelVector y = (LabelVector(10) << 0, 0, 0, 0, 0, 1, 1, 1, 1, 1).finished();
  const double eps = 2.0;
  std::vector<double> class_noise;
  std::vector<double> feature_noise;
  for (int s = 0; s < 3000; ++s) {
    Rng rng(DeriveSeed(21, s));
    const auto m = DpNaiveBayes(x, y, eps, {}, rng);
    class_noise.push_back(m.counts[0] - 5.0);
    // Class 1 holds three ones in feature 0.
    feature_noise.push_back(m.means(1, 0) * m.counts[1] - 3.0);
  }
  auto cdf = [eps](double v) { return testing::LaplaceCdf(v, 1.0 / eps); };
  EXPECT_LT(testing::KsStatistic(class_noise, cdf), testing::KsCritical(class_noise.size()));
  EXPECT_LT(testing::KsStatistic(feature_noise, cdf),
            testing::KsCritical(feature_noise.size()));
}

TEST(NaiveBayesTest, BernoulliProbabilitiesStayInsideFloor) {
  FeatureMatrix x(6, 1);
  x << 1, 1, 1, 0, 0, 0;
  const LabelVector y = (LabelVector(6) << 0, 0, 0, 1, 1, 1).finished();
  NaiveBayesParams p;
  p.likelihood = NbLikelihood::kBernoulli;
  const auto m = TrainNaiveBayes(x, y, p);
  EXPECT_EQ(m.means(0, 0), 1.0 - p.probability_floor);
  EXPECT_EQ(m.means(1, 0), p.probability_floor);
  const Vector proba = m.PredictProba(x);
  EXPECT_TRUE(AllFinite(proba));
  // Equal priors: the posterior is floor / ((1 - floor) + floor).
  EXPECT_NEAR(proba(0), p.probability_floor, 1e-15);
  EXPECT_NEAR(proba(5), 1.0 - p.probability_floor, 1e-15);
}

TEST(NaiveBayesTest, ExactCountsForBaseline) {
  FeatureMatrix x = FeatureMatrix::Random(7, 2);
  const LabelVector y = (LabelVector(7) << 0, 0, 0, 1, 1, 1, 1).finished();
  const auto m = TrainNaiveBayes(x, y, {});
  EXPECT_EQ(m.counts[0], 3.0);
  EXPECT_EQ(m.counts[1], 4.0);
  EXPECT_DOUBLE_EQ(m.priors[1], 4.0 / 7.0);
}

TEST(ModelTest, NamesRoundTrip) {
  for (auto k : kAllModelKinds) EXPECT_EQ(ParseModel(ModelName(k)), k);
  EXPECT_THROW(ParseModel("svm"), Error);
}

TEST(ModelTest, SupervisedKindsRejectSingleClass) {
  const FeatureMatrix x = FeatureMatrix::Random(20, 2);
  for (auto k : {ModelKind::kLogReg, ModelKind::kRandomForest, ModelKind::kNaiveBayes}) {
    Rng rng(1);
    EXPECT_EQ(CodeOf([&] { Train(k, x, LabelVector::Zero(20), {}, rng); }),
              ErrorCode::kTrainError)
        << ModelName(k);
  }
}

TEST(ExperimentTest, ZeroSensitivityEqualsBaseline) {
  const Dataset d = Preprocess(GenerateSynthetic({300, 80, 4}));
  const auto split = SplitAndBalance(d, {0.2, true, true, 4});
  Hyperparams h;
  h.rf.trees = 10;
  for (auto k : kAllModelKinds) {
    const auto base = RunInputPerturbationExperiment(split, k, std::nullopt, 2, 9, h);
    const auto zero = RunInputPerturbationExperiment(
        split, k, dp::MechanismSpec::Laplace(1.0, 0.0), 2, 9, h);
    EXPECT_EQ(base.mean.accuracy, zero.mean.accuracy) << ModelName(k);
    EXPECT_EQ(base.mean.auc, zero.mean.auc) << ModelName(k);
    EXPECT_EQ(base.run_seeds, zero.run_seeds);
  }
}

// Toy set for the epsilon -> infinity limit; every row lies inside the
// clipping ball, so clipping is a no-op and only the noise differs.
struct LimitFixture {
  FeatureMatrix x;
  LabelVector y;
  double sensitivity;
};

LimitFixture LimitSet() {
  const Dataset d = Blobs(200, 1.5, 31);
  return {d.features, d.labels, d.features.rowwise().norm().maxCoeff()};
}

constexpr double kHugeEpsilon = 1e6;

TEST(DpLimitTest, LogisticRegression) {
  const auto s = LimitSet();
  Rng rng(1);
  const auto dp = DpLogisticRegression(s.x, s.y, kHugeEpsilon, s.sensitivity, {}, rng);
  const auto np = TrainLogistic(s.x, s.y, {});
  EXPECT_LT((dp.weights - np.weights).norm(), 1e-3);
  EXPECT_LT(std::abs(dp.intercept - np.intercept), 1e-3);
}

TEST(DpLimitTest, RandomForest) {
  const auto s = LimitSet();
  ForestParams p;
  p.trees = 20;
  Rng a(2), b(2);
  const auto dp = DpRandomForest(s.x, s.y, kHugeEpsilon, s.sensitivity, p, a);
  const auto np = TrainForest(s.x, s.y, p, b);
  double dist = 0.0;
  for (std::size_t t = 0; t < dp.trees.size(); ++t) {
    ASSERT_EQ(dp.trees[t].nodes.size(), np.trees[t].nodes.size());
    for (std::size_t i = 0; i < dp.trees[t].nodes.size(); ++i) {
      dist = std::max(dist, std::abs(dp.trees[t].nodes[i].value - np.trees[t].nodes[i].value));
    }
  }
  EXPECT_LT(dist, 1e-3);
  EXPECT_EQ((dp.PredictProba(s.x).array() > 0.5).cast<int>().matrix(),
            (np.PredictProba(s.x).array() > 0.5).cast<int>().matrix());
}

TEST(DpLimitTest, KMeans) {
  const auto s = LimitSet();
  KMeansParams p{2, 50};
  Rng a(3), b(3);
  const auto dp = RunDpKMeans(s.x, p, kHugeEpsilon, s.sensitivity, a);
  const auto np = RunKMeans(s.x, p, b);
  EXPECT_LT((dp.centroids - np.centroids).norm(), 1e-3);
}

TEST(DpLimitTest, NaiveBayes) {
  const auto s = LimitSet();
  Rng rng(4);
  const auto dp = DpNaiveBayes(s.x, s.y, kHugeEpsilon, {}, rng);
  const auto np = TrainNaiveBayes(s.x, s.y, {});
  EXPECT_LT((dp.means - np.means).norm(), 1e-3);
  EXPECT_LT((dp.variances - np.variances).norm(), 1e-3);
  EXPECT_NEAR(dp.priors[0], np.priors[0], 1e-3);
}

}  // namespace
}  // namespace dphealth::ml
