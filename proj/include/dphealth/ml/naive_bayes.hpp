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

#ifndef DPHEALTH_ML_NAIVE_BAYES_HPP_
#define DPHEALTH_ML_NAIVE_BAYES_HPP_

#include <array>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

enum class NbLikelihood { kGaussian, kBernoulli };

struct NaiveBayesParams {
  NbLikelihood likelihood = NbLikelihood::kGaussian;
  double variance_floor = 1e-9;
  // Bernoulli probabilities are kept in [floor, 1 - floor].
  double probability_floor = 1e-6;
};

struct NaiveBayesModel {
  NbLikelihood likelihood = NbLikelihood::kGaussian;
  // Zero for a class absent from the training data.
  std::array<double, 2> priors{0.0, 0.0};
  // Class counts the priors were formed from; perturbed for the DP variant.
  std::array<double, 2> counts{0.0, 0.0};
  // 2 x d. Gaussian: per-class means and variances. Bernoulli: `means`
  // holds P(x_j = 1 | class) and `variances` is unused.
  FeatureMatrix means;
  FeatureMatrix variances;

  bool has_class(int c) const { return priors[static_cast<std::size_t>(c)] > 0.0; }
  // Class-1 posterior.
  Vector PredictProba(const FeatureMatrix& x) const;
};

// Empirical priors and class-conditional likelihoods. Gaussian variances are
// population variances raised to `variance_floor`. Bernoulli features are
// read as x > 0.5.
NaiveBayesModel TrainNaiveBayes(const FeatureMatrix& x, const LabelVector& y,
                                const NaiveBayesParams& params);

// Sufficient statistics (class counts, per-feature counts or sums and sums of
// squares) each receive Lap(1 / epsilon). Perturbed class counts below one
// are clamped to one. Single-class data is accepted.
NaiveBayesModel DpNaiveBayes(const FeatureMatrix& x, const LabelVector& y,
                             double epsilon, const NaiveBayesParams& params,
                             Rng& rng);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_NAIVE_BAYES_HPP_
