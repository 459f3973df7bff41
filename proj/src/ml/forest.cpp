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

#include "dphealth/ml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dphealth::ml {
namespace {

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, const LabelVector& y,
              const ForestParams& params, int max_features, Rng& rng)
      : x_(x), y_(y), params_(params), max_features_(max_features), rng_(rng) {}

  DecisionTree Build(std::vector<Eigen::Index> rows) {
    tree_.nodes.clear();
    Grow(rows, 0);
    return std::move(tree_);
  }

 private:
  int Grow(std::vector<Eigen::Index>& rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const auto n = static_cast<int>(rows.size());
    int positives = 0;
    for (auto r : rows) positives += y_(r);
    {
      auto& node = tree_.nodes[id];
      node.samples = n;
      node.value = n > 0 ? static_cast<double>(positives) / n : 0.0;
      node.raw_value = node.value;
    }
    const bool pure = positives == 0 || positives == n;
    if (depth >= params_.max_depth || n < params_.min_samples_split || pure) {
      return id;
    }
    const SplitCandidate best = FindSplit(rows, positives);
    if (best.feature < 0) return id;

    std::vector<Eigen::Index> left;
    std::vector<Eigen::Index> right;
    for (auto r : rows) {
      (x_(r, best.feature) <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = Grow(left, depth + 1);
    const int r = Grow(right, depth + 1);
    auto& node = tree_.nodes[id];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  SplitCandidate FindSplit(const std::vector<Eigen::Index>& rows, int positives) {
    const auto d = static_cast<int>(x_.cols());
    // Partial Fisher-Yates draw of the candidate features.
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    for (int k = 0; k < max_features_; ++k) {
      const auto j = k + static_cast<int>(rng_.UniformInt(static_cast<std::uint64_t>(d - k)));
      std::swap(features[k], features[j]);
    }

    const auto n = static_cast<int>(rows.size());
    const int min_leaf = std::max(1, params_.min_samples_leaf);
    SplitCandidate best;
    best.impurity = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> column(rows.size());
    for (int k = 0; k < max_features_; ++k) {
      const int f = features[k];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        column[i] = {x_(rows[i], f), y_(rows[i])};
      }
      std::sort(column.begin(), column.end());
      int left_pos = 0;
      for (int i = 0; i < n - 1; ++i) {
        left_pos += column[i].second;
        const int left_n = i + 1;
        const int right_n = n - left_n;
        if (left_n < min_leaf) continue;
        if (right_n < min_leaf) break;
        if (column[i].first == column[i + 1].first) continue;
        const double impurity = WeightedGini(left_pos, left_n) +
                                WeightedGini(positives - left_pos, right_n);
        if (impurity < best.impurity) {
          best.feature = f;
          // Midpoint, falling back to the lower value if it rounds up.
          double t = 0.5 * (column[i].first + column[i + 1].first);
          if (!(t < column[i + 1].first)) t = column[i].first;
          best.threshold = t;
          best.impurity = impurity;
        }
      }
    }
    return best;
  }

  // Gini impurity times node size.
  static double WeightedGini(int pos, int n) {
    const double p = static_cast<double>(pos) / n;
    return n * 2.0 * p * (1.0 - p);
  }

  const FeatureMatrix& x_;
  const LabelVector& y_;
  const ForestParams& params_;
  int max_features_;
  Rng& rng_;
  DecisionTree tree_;
};

}  // namespace

int DecisionTree::LeafCount() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                        [](const TreeNode& n) { return n.is_leaf(); }));
}

Vector ForestModel::PredictProba(const FeatureMatrix& x) const {
  Vector p = Vector::Zero(x.rows());
  if (trees.empty()) return p;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.Predict(x.row(i));
    p(i) = sum / static_cast<double>(trees.size());
  }
  return p;
}

ForestModel TrainForest(const FeatureMatrix& x, const LabelVector& y,
                        const ForestParams& params, Rng& rng) {
  Require(x.rows() == y.size() && x.rows() > 0 && x.cols() > 0,
          ErrorCode::kInvalidInput, "feature rows and labels must match");
  Require(AllFinite(x), ErrorCode::kInvalidInput, "non-finite features");
  Require(params.trees > 0 && params.max_depth > 0 &&
              params.min_samples_split > 0 && params.min_samples_leaf > 0 &&
              params.max_features >= 0,
          ErrorCode::kInvalidParams, "invalid forest params");
  const auto positives = (y.array() == 1).count();
  Require(positives > 0 && positives < y.size(), ErrorCode::kTrainError,
          "random forest needs both classes");

  const auto d = static_cast<int>(x.cols());
  int max_features = params.max_features;
  if (max_features == 0) {
    max_features = std::max(1, static_cast<int>(std::lround(std::sqrt(d))));
  }
  max_features = std::min(max_features, d);

  ForestModel forest;
  forest.trees.reserve(static_cast<std::size_t>(params.trees));
  const auto n = static_cast<std::uint64_t>(x.rows());
  TreeBuilder builder(x, y, params, max_features, rng);
  for (int t = 0; t < params.trees; ++t) {
    std::vector<Eigen::Index> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<Eigen::Index>(rng.UniformInt(n));
    } else {
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    }
    forest.trees.push_back(builder.Build(std::move(rows)));
  }
  return forest;
}

void PerturbLeaves(ForestModel& forest, double sigma, Rng& rng) {
  Require(sigma >= 0.0 && std::isfinite(sigma), ErrorCode::kInvalidParams,
          "leaf noise sigma must be finite and non-negative");
  for (auto& tree : forest.trees) {
    for (auto& node : tree.nodes) {
      if (!node.is_leaf()) continue;
      node.raw_value = node.value + sigma * rng.StandardNormal();
      // Two classes: [1 - p, p] sums to one once p is in [0, 1].
      node.value = std::clamp(node.raw_value, 0.0, 1.0);
    }
  }
}

ForestModel DpRandomForest(const FeatureMatrix& x, const LabelVector& y,
                           double epsilon, double sensitivity,
                           const ForestParams& params, Rng& rng) {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  Require(std::isfinite(sensitivity) && sensitivity >= 0.0,
          ErrorCode::kInvalidParams, "sensitivity must be non-negative");
  ForestModel forest = TrainForest(x, y, params, rng);
  PerturbLeaves(forest, sensitivity / epsilon, rng);
  return forest;
}

}  // namespace dphealth::ml
