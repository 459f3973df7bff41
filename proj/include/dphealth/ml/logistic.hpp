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

#ifndef DPHEALTH_ML_LOGISTIC_HPP_
#define DPHEALTH_ML_LOGISTIC_HPP_

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

struct LogisticParams {
  // Inverse L2 strength, scikit-learn convention.
  double inverse_l2 = 1.0;
  int max_iters = 1000;
  double learning_rate = 0.1;
};

struct LogisticModel {
  Vector weights;
  double intercept = 0.0;

  Vector Decision(const FeatureMatrix& x) const {
    return (x * weights).array() + intercept;
  }
  Vector PredictProba(const FeatureMatrix& x) const;
};

template <typename Derived>
VectorX<typename Derived::Scalar> Sigmoid(const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  return z.unaryExpr([](Scalar v) {
    // Branches keep exp() from overflowing for large |v|.
    if (v >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-v));
    const Scalar e = std::exp(v);
    return e / (Scalar(1) + e);
  });
}

// Full-batch gradient descent on the mean log-loss plus
// ||w||^2 / (2 * inverse_l2 * n). The intercept is not penalized.
LogisticModel TrainLogistic(const FeatureMatrix& x, const LabelVector& y,
                            const LogisticParams& params);

// Gradient perturbation. Rows are clipped to `sensitivity` in L2, giving a
// per-example gradient L1 bound of sqrt(d) * sensitivity + 1 (the +1 is the
// intercept). Each iteration spends epsilon / max_iters and adds
// per-component Laplace noise to the mean gradient.
LogisticModel DpLogisticRegression(const FeatureMatrix& x, const LabelVector& y,
                                   double epsilon, double sensitivity,
                                   const LogisticParams& params, Rng& rng);

// Per-example L1 gradient bound for rows of L2 norm <= sensitivity.
double GradientL1Bound(double sensitivity, Eigen::Index dims);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_LOGISTIC_HPP_
