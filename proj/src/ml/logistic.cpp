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

#include "dphealth/ml/logistic.hpp"

#include <cmath>
#include <string>

#include "dphealth/dp/sensitivity.hpp"

namespace dphealth::ml {
namespace {

void CheckInputs(const FeatureMatrix& x, const LabelVector& y,
                 const LogisticParams& params) {
  Require(x.rows() == y.size() && x.rows() > 0, ErrorCode::kInvalidInput,
          "feature rows and labels must match and be non-empty");
  Require(AllFinite(x), ErrorCode::kInvalidInput, "non-finite features");
  Require(params.max_iters >= 0 && params.learning_rate > 0.0 &&
              params.inverse_l2 > 0.0,
          ErrorCode::kInvalidParams, "invalid logistic regression params");
}

// `noise_scale` <= 0 disables gradient noise.
LogisticModel Descend(const FeatureMatrix& x, const LabelVector& y,
                      const LogisticParams& params, double noise_scale,
                      Rng* rng) {
  const auto n = static_cast<double>(x.rows());
  const Vector target = y.cast<double>();
  LogisticModel model{Vector::Zero(x.cols()), 0.0};
  const double l2 = 1.0 / (params.inverse_l2 * n);
  for (int t = 0; t < params.max_iters; ++t) {
    const Vector residual = Sigmoid(model.Decision(x)) - target;
    Vector grad_w = x.transpose() * residual / n + l2 * model.weights;
    double grad_b = residual.sum() / n;
    if (noise_scale > 0.0) {
      for (auto& g : grad_w) g += rng->Laplace(noise_scale);
      grad_b += rng->Laplace(noise_scale);
    }
    model.weights -= params.learning_rate * grad_w;
    model.intercept -= params.learning_rate * grad_b;
    if (!AllFinite(model.weights) || !std::isfinite(model.intercept)) {
      Fail(ErrorCode::kTrainError,
           "logistic regression diverged at iteration " + std::to_string(t));
    }
  }
  return model;
}

}  // namespace

Vector LogisticModel::PredictProba(const FeatureMatrix& x) const {
  return Sigmoid(Decision(x));
}

double GradientL1Bound(double sensitivity, Eigen::Index dims) {
  return std::sqrt(static_cast<double>(dims)) * sensitivity + 1.0;
}

LogisticModel TrainLogistic(const FeatureMatrix& x, const LabelVector& y,
                            const LogisticParams& params) {
  CheckInputs(x, y, params);
  const auto positives = (y.array() == 1).count();
  Require(positives > 0 && positives < y.size(), ErrorCode::kTrainError,
          "logistic regression needs both classes");
  return Descend(x, y, params, 0.0, nullptr);
}

LogisticModel DpLogisticRegression(const FeatureMatrix& x, const LabelVector& y,
                                   double epsilon, double sensitivity,
                                   const LogisticParams& params, Rng& rng) {
  CheckInputs(x, y, params);
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  Require(sensitivity >= 0.0, ErrorCode::kInvalidParams,
          "sensitivity must be non-negative");
  if (params.max_iters == 0) return LogisticModel{Vector::Zero(x.cols()), 0.0};
  const FeatureMatrix clipped = dp::ClipRows(x, sensitivity);
  const double per_iter_epsilon = epsilon / params.max_iters;
  // Replacing one example moves the mean gradient by at most bound / n.
  const double mean_sensitivity =
      GradientL1Bound(sensitivity, x.cols()) / static_cast<double>(x.rows());
  return Descend(clipped, y, params, mean_sensitivity / per_iter_epsilon, &rng);
}

}  // namespace dphealth::ml
