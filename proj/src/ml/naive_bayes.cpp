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

#include "dphealth/ml/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace dphealth::ml {
namespace {

struct ClassStats {
  std::array<double, 2> counts{0.0, 0.0};
  // 2 x d.
  FeatureMatrix sums;
  FeatureMatrix sums_sq;
};

ClassStats Collect(const FeatureMatrix& x, const LabelVector& y,
                   NbLikelihood likelihood) {
  ClassStats s;
  s.sums = FeatureMatrix::Zero(2, x.cols());
  s.sums_sq = FeatureMatrix::Zero(2, x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = y(i);
    s.counts[static_cast<std::size_t>(c)] += 1.0;
    if (likelihood == NbLikelihood::kBernoulli) {
      s.sums.row(c) += (x.row(i).array() > 0.5).cast<double>().matrix();
    } else {
      s.sums.row(c) += x.row(i);
      s.sums_sq.row(c) += x.row(i).array().square().matrix();
    }
  }
  return s;
}

void CheckInputs(const FeatureMatrix& x, const LabelVector& y,
                 const NaiveBayesParams& params) {
  Require(x.rows() == y.size() && x.rows() > 0 && x.cols() > 0,
          ErrorCode::kInvalidInput, "feature rows and labels must match");
  Require(AllFinite(x), ErrorCode::kInvalidInput, "non-finite features");
  Require(((y.array() == 0) || (y.array() == 1)).all(), ErrorCode::kInvalidInput,
          "labels must be binary");
  Require(params.variance_floor > 0.0 && params.probability_floor > 0.0 &&
              params.probability_floor < 0.5,
          ErrorCode::kInvalidParams, "invalid naive Bayes floors");
}

}  // namespace

Vector NaiveBayesModel::PredictProba(const FeatureMatrix& x) const {
  Vector p(x.rows());
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::array<double, 2> log_post{-std::numeric_limits<double>::infinity(),
                                   -std::numeric_limits<double>::infinity()};
    for (int c = 0; c < 2; ++c) {
      if (!has_class(c)) continue;
      double lp = std::log(priors[static_cast<std::size_t>(c)]);
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (likelihood == NbLikelihood::kGaussian) {
          const double var = variances(c, j);
          const double d = x(i, j) - means(c, j);
          lp += -0.5 * (log_2pi + std::log(var) + d * d / var);
        } else {
          const double q = means(c, j);
          lp += x(i, j) > 0.5 ? std::log(q) : std::log1p(-q);
        }
      }
      log_post[static_cast<std::size_t>(c)] = lp;
    }
    if (!has_class(0)) {
      p(i) = 1.0;
    } else if (!has_class(1)) {
      p(i) = 0.0;
    } else {
      // Logistic of the log-odds; stable for large magnitudes.
      const double z = log_post[1] - log_post[0];
      p(i) = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }
  }
  return p;
}

NaiveBayesModel TrainNaiveBayes(const FeatureMatrix& x, const LabelVector& y,
                                const NaiveBayesParams& params) {
  CheckInputs(x, y, params);
  const auto positives = (y.array() == 1).count();
  Require(positives > 0 && positives < y.size(), ErrorCode::kTrainError,
          "naive Bayes needs both classes");
  NaiveBayesModel model;
  model.likelihood = params.likelihood;
  model.means = FeatureMatrix::Zero(2, x.cols());
  model.variances = FeatureMatrix::Ones(2, x.cols());
  const double n = static_cast<double>(x.rows());
  for (int c = 0; c < 2; ++c) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (y(i) == c) rows.push_back(i);
    }
    const double nc = static_cast<double>(rows.size());
    model.priors[static_cast<std::size_t>(c)] = nc / n;
    model.counts[static_cast<std::size_t>(c)] = nc;
    FeatureMatrix xc(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      xc.row(static_cast<Eigen::Index>(k)) = x.row(rows[k]);
    }
    if (params.likelihood == NbLikelihood::kBernoulli) {
      const Vector freq = (xc.array() > 0.5).cast<double>().colwise().sum().transpose() / nc;
      model.means.row(c) = freq.array()
                               .max(params.probability_floor)
                               .min(1.0 - params.probability_floor)
                               .matrix()
                               .transpose();
    } else {
      const Eigen::RowVectorXd mean = xc.colwise().mean();
      const Eigen::RowVectorXd var =
          (xc.rowwise() - mean).array().square().colwise().sum() / nc;
      model.means.row(c) = mean;
      model.variances.row(c) = var.array().max(params.variance_floor).matrix();
    }
  }
  return model;
}

NaiveBayesModel DpNaiveBayes(const FeatureMatrix& x, const LabelVector& y,
                             double epsilon, const NaiveBayesParams& params,
                             Rng& rng) {
  CheckInputs(x, y, params);
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  const double b = 1.0 / epsilon;
  ClassStats s = Collect(x, y, params.likelihood);

  NaiveBayesModel model;
  model.likelihood = params.likelihood;
  model.means = FeatureMatrix::Zero(2, x.cols());
  model.variances = FeatureMatrix::Ones(2, x.cols());
  std::array<double, 2> noisy_counts{0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    // Classes absent from the data stay absent; noise only hides how many
    // records a present class holds.
    if (s.counts[cu] == 0.0) continue;
    const double nc = std::max(1.0, s.counts[cu] + rng.Laplace(b));
    noisy_counts[cu] = nc;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double sum = s.sums(c, j) + rng.Laplace(b);
      if (params.likelihood == NbLikelihood::kBernoulli) {
        model.means(c, j) = std::clamp(sum / nc, params.probability_floor,
                                       1.0 - params.probability_floor);
      } else {
        const double sum_sq = s.sums_sq(c, j) + rng.Laplace(b);
        const double mean = sum / nc;
        model.means(c, j) = mean;
        model.variances(c, j) = std::max(params.variance_floor, sum_sq / nc - mean * mean);
      }
    }
  }
  const double total = noisy_counts[0] + noisy_counts[1];
  model.counts = noisy_counts;
  for (std::size_t c = 0; c < 2; ++c) model.priors[c] = noisy_counts[c] / total;
  return model;
}

}  // namespace dphealth::ml
