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

#ifndef DPHEALTH_ML_FOREST_HPP_
#define DPHEALTH_ML_FOREST_HPP_

#include <vector>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

struct ForestParams {
  int trees = 100;
  int max_depth = 5;
  int min_samples_split = 20;
  int min_samples_leaf = 10;
  // Features examined per split; 0 means round(sqrt(d)).
  int max_features = 0;
  bool bootstrap = true;
};

struct TreeNode {
  // -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Class-1 probability at a leaf, always in [0, 1].
  double value = 0.0;
  // Leaf score before clamping; equals `value` for non-private trees.
  double raw_value = 0.0;
  int samples = 0;

  bool is_leaf() const { return feature < 0; }
};

// Binary CART tree stored as a flat node array; node 0 is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  template <typename Derived>
  int LeafIndex(const Eigen::MatrixBase<Derived>& row) const {
    int i = 0;
    while (!nodes[i].is_leaf()) {
      const auto& node = nodes[i];
      i = row(node.feature) <= node.threshold ? node.left : node.right;
    }
    return i;
  }

  template <typename Derived>
  double Predict(const Eigen::MatrixBase<Derived>& row) const {
    return nodes[LeafIndex(row)].value;
  }

  int LeafCount() const;
};

struct ForestModel {
  std::vector<DecisionTree> trees;

  // Mean of the trees' leaf probabilities.
  Vector PredictProba(const FeatureMatrix& x) const;
};

// Gini-split CART trees on bootstrap resamples with per-split feature
// subsampling.
ForestModel TrainForest(const FeatureMatrix& x, const LabelVector& y,
                        const ForestParams& params, Rng& rng);

// Adds N(0, sigma^2) to every leaf's class-1 probability, then clamps to
// [0, 1]. Topology and thresholds are left untouched.
void PerturbLeaves(ForestModel& forest, double sigma, Rng& rng);

// Trains the non-private forest with `rng` then perturbs its leaves with
// sigma = sensitivity / epsilon drawn from the same stream.
ForestModel DpRandomForest(const FeatureMatrix& x, const LabelVector& y,
                           double epsilon, double sensitivity,
                           const ForestParams& params, Rng& rng);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_FOREST_HPP_
