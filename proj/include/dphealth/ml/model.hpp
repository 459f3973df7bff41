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

#ifndef DPHEALTH_ML_MODEL_HPP_
#define DPHEALTH_ML_MODEL_HPP_

#include <string_view>
#include <variant>

#include "dphealth/common.hpp"
#include "dphealth/ml/forest.hpp"
#include "dphealth/ml/kmeans.hpp"
#include "dphealth/ml/logistic.hpp"
#include "dphealth/ml/naive_bayes.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

enum class ModelKind { kKMeans, kLogReg, kRandomForest, kNaiveBayes };

inline constexpr ModelKind kAllModelKinds[] = {
    ModelKind::kRandomForest, ModelKind::kKMeans, ModelKind::kLogReg,
    ModelKind::kNaiveBayes};

// "kmeans", "logreg", "random_forest", "naive_bayes".
std::string_view ModelName(ModelKind kind);
ModelKind ParseModel(std::string_view name);

struct Hyperparams {
  ForestParams rf;
  LogisticParams lr;
  KMeansParams kmeans;
  NaiveBayesParams nb;
};

struct TrainedModel {
  ModelKind kind = ModelKind::kLogReg;
  std::variant<KMeansModel, LogisticModel, ForestModel, NaiveBayesModel> params;
};

// Non-private baselines. For kKMeans the labels only drive the
// cluster-to-class map.
TrainedModel Train(ModelKind kind, const FeatureMatrix& x, const LabelVector& y,
                   const Hyperparams& hyper, Rng& rng);

// In-algorithm DP variants. `sensitivity` is ignored by naive Bayes, whose
// count queries have unit sensitivity.
TrainedModel TrainDp(ModelKind kind, const FeatureMatrix& x, const LabelVector& y,
                     double epsilon, double sensitivity, const Hyperparams& hyper,
                     Rng& rng);

// Class-1 probability in [0, 1]; class 0 receives the complement.
Vector PredictProba(const TrainedModel& model, const FeatureMatrix& x);
LabelVector Predict(const TrainedModel& model, const FeatureMatrix& x);
// Ranking scores for AUC. Equal to PredictProba except for kKMeans, which
// ranks by negative distance to the nearest class-1 centroid.
Vector Scores(const TrainedModel& model, const FeatureMatrix& x);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_MODEL_HPP_
