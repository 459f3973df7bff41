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

#include "dphealth/ml/model.hpp"

#include <string>

namespace dphealth::ml {

std::string_view ModelName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kKMeans:
      return "kmeans";
    case ModelKind::kLogReg:
      return "logreg";
    case ModelKind::kRandomForest:
      return "random_forest";
    case ModelKind::kNaiveBayes:
      return "naive_bayes";
  }
  return "unknown";
}

ModelKind ParseModel(std::string_view name) {
  for (ModelKind kind : kAllModelKinds) {
    if (ModelName(kind) == name) return kind;
  }
  Fail(ErrorCode::kInvalidParams, "unknown model kind: " + std::string(name));
}

TrainedModel Train(ModelKind kind, const FeatureMatrix& x, const LabelVector& y,
                   const Hyperparams& hyper, Rng& rng) {
  TrainedModel m;
  m.kind = kind;
  switch (kind) {
    case ModelKind::kKMeans:
      m.params = TrainKMeans(x, y, hyper.kmeans, rng);
      break;
    case ModelKind::kLogReg:
      m.params = TrainLogistic(x, y, hyper.lr);
      break;
    case ModelKind::kRandomForest:
      m.params = TrainForest(x, y, hyper.rf, rng);
      break;
    case ModelKind::kNaiveBayes:
      m.params = TrainNaiveBayes(x, y, hyper.nb);
      break;
  }
  return m;
}

TrainedModel TrainDp(ModelKind kind, const FeatureMatrix& x, const LabelVector& y,
                     double epsilon, double sensitivity, const Hyperparams& hyper,
                     Rng& rng) {
  TrainedModel m;
  m.kind = kind;
  switch (kind) {
    case ModelKind::kKMeans:
      m.params = DpKMeans(x, y, hyper.kmeans, epsilon, sensitivity, rng);
      break;
    case ModelKind::kLogReg:
      m.params = DpLogisticRegression(x, y, epsilon, sensitivity, hyper.lr, rng);
      break;
    case ModelKind::kRandomForest:
      m.params = DpRandomForest(x, y, epsilon, sensitivity, hyper.rf, rng);
      break;
    case ModelKind::kNaiveBayes:
      m.params = DpNaiveBayes(x, y, epsilon, hyper.nb, rng);
      break;
  }
  return m;
}

Vector PredictProba(const TrainedModel& model, const FeatureMatrix& x) {
  return std::visit([&](const auto& p) { return p.PredictProba(x); }, model.params);
}

LabelVector Predict(const TrainedModel& model, const FeatureMatrix& x) {
  if (const auto* km = std::get_if<KMeansModel>(&model.params)) {
    return (km->Predict(x).array() == 1).cast<int>().matrix();
  }
  return (PredictProba(model, x).array() > 0.5).cast<int>().matrix();
}

Vector Scores(const TrainedModel& model, const FeatureMatrix& x) {
  if (const auto* km = std::get_if<KMeansModel>(&model.params)) return km->Score(x);
  return PredictProba(model, x);
}

}  // namespace dphealth::ml
