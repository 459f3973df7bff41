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

#ifndef DPHEALTH_ATTACKS_ATTACKS_HPP_
#define DPHEALTH_ATTACKS_ATTACKS_HPP_

#include <functional>
#include <optional>
#include <string_view>

#include "dphealth/common.hpp"
#include "dphealth/ml/logistic.hpp"

namespace dphealth::attacks {

enum class AttackKind { kAttributeInference, kReconstruction };

std::string_view AttackName(AttackKind kind);

struct AttackReport {
  AttackKind kind = AttackKind::kReconstruction;
  // Empty for the no-DP baseline.
  std::optional<double> epsilon;
  // Success rate or mean absolute correlation, in [0, 1].
  double score = 0.0;
};

// Fits on (train_x, train_y) and returns 0/1 predictions for test_x.
using Adversary = std::function<LabelVector(
    const FeatureMatrix& train_x, const LabelVector& train_y,
    const FeatureMatrix& test_x)>;

// Logistic regression on features standardized with training-part moments.
Adversary LogisticAdversary(const ml::LogisticParams& params = {});

// Median-binarized target: x > median, or x >= median when the strict form
// is constant. Throws kAttackError if both forms are constant.
LabelVector BinarizeAtMedian(const Vector& column);

// The adversary sees `released` without the target column and predicts the
// binarized target of `original`. Rows are put into a canonical order keyed
// by a hash of their contents and the first ceil(0.2 n) form the scoring
// part, so the score does not depend on row order. Score = held-out accuracy.
AttackReport AttributeInferenceAttack(const FeatureMatrix& original,
                                      const FeatureMatrix& released,
                                      Eigen::Index target_column,
                                      const Adversary& adversary = LogisticAdversary());

// Absolute Pearson correlation of two columns; 0 if either is constant.
// Sums run over value-sorted pairs, so the result is exactly invariant to
// row order.
double AbsoluteCorrelation(const Vector& a, const Vector& b);

// Mean absolute correlation between matching columns, taken over the columns
// that vary in `original`. A column that is constant in `original` carries
// no information to reconstruct and is left out of the mean; one that is
// constant only in `perturbed` contributes 0.
AttackReport ReconstructionCorrelation(const FeatureMatrix& original,
                                       const FeatureMatrix& perturbed);

}  // namespace dphealth::attacks

#endif  // DPHEALTH_ATTACKS_ATTACKS_HPP_
