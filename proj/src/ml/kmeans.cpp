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

#include "dphealth/ml/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dphealth::ml {
namespace {

void CheckInputs(const FeatureMatrix& x, const KMeansParams& params) {
  Require(params.k >= 2, ErrorCode::kInvalidParams, "k must be at least 2");
  Require(params.max_iters >= 0, ErrorCode::kInvalidParams,
          "max_iters must be non-negative");
  Require(x.rows() >= params.k && x.cols() > 0, ErrorCode::kInvalidInput,
          "need at least k rows");
  Require(AllFinite(x), ErrorCode::kInvalidInput, "non-finite features");
}

FeatureMatrix InitialCentroids(const FeatureMatrix& x, int k, Rng& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.rows()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  FeatureMatrix c(k, x.cols());
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.UniformInt(static_cast<std::uint64_t>(x.rows() - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    c.row(i) = x.row(idx[static_cast<std::size_t>(i)]);
  }
  return c;
}

bool AssignAll(const FeatureMatrix& x, const FeatureMatrix& centroids,
               std::vector<int>& assignments) {
  bool changed = false;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = NearestCentroid(x.row(i), centroids);
    if (assignments[static_cast<std::size_t>(i)] != c) {
      assignments[static_cast<std::size_t>(i)] = c;
      changed = true;
    }
  }
  return changed;
}

// Recomputes cluster means in place; returns cluster sizes. Empty clusters
// are re-seeded from a random data point.
std::vector<Eigen::Index> UpdateMeans(const FeatureMatrix& x,
                                      const std::vector<int>& assignments,
                                      FeatureMatrix& centroids, Rng& rng) {
  const auto k = centroids.rows();
  FeatureMatrix sums = FeatureMatrix::Zero(k, x.cols());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int c = assignments[static_cast<std::size_t>(i)];
    sums.row(c) += x.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto count = counts[static_cast<std::size_t>(c)];
    if (count > 0) {
      centroids.row(c) = sums.row(c) / static_cast<double>(count);
    } else {
      const auto r = static_cast<Eigen::Index>(
          rng.UniformInt(static_cast<std::uint64_t>(x.rows())));
      centroids.row(c) = x.row(r);
    }
  }
  return counts;
}

KMeansModel WithClassMap(Clustering clustering, const LabelVector& y, int k) {
  KMeansModel model;
  model.cluster_to_class = MapClustersToClasses(clustering.assignments, y, k);
  model.centroids = std::move(clustering.centroids);
  return model;
}

}  // namespace

std::vector<int> MapClustersToClasses(const std::vector<int>& assignments,
                                      const LabelVector& labels, int k) {
  Require(k >= 1, ErrorCode::kInvalidParams, "k must be positive");
  Require(k <= kMaxMappedClusters, ErrorCode::kUnsupported,
          "cluster mapping supports k <= " + std::to_string(kMaxMappedClusters));
  Require(static_cast<Eigen::Index>(assignments.size()) == labels.size(),
          ErrorCode::kInvalidInput, "assignments and labels differ in length");
  std::vector<std::vector<long>> counts(static_cast<std::size_t>(k),
                                        std::vector<long>(static_cast<std::size_t>(k), 0));
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    const int c = assignments[i];
    const int l = labels(static_cast<Eigen::Index>(i));
    Require(c >= 0 && c < k && l >= 0 && l < k, ErrorCode::kInvalidInput,
            "cluster and label ids must lie in [0, k)");
    ++counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)];
  }
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  long best_agreement = -1;
  do {
    long agreement = 0;
    for (int c = 0; c < k; ++c) {
      agreement += counts[static_cast<std::size_t>(c)]
                         [static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])];
    }
    if (agreement > best_agreement) {
      best_agreement = agreement;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Clustering RunKMeans(const FeatureMatrix& x, const KMeansParams& params, Rng& rng) {
  CheckInputs(x, params);
  Clustering out;
  out.centroids = InitialCentroids(x, params.k, rng);
  out.assignments.assign(static_cast<std::size_t>(x.rows()), -1);
  for (int t = 0; t < params.max_iters; ++t) {
    const bool changed = AssignAll(x, out.centroids, out.assignments);
    out.iterations = t + 1;
    if (!changed && t > 0) break;
    UpdateMeans(x, out.assignments, out.centroids, rng);
  }
  if (params.max_iters == 0) AssignAll(x, out.centroids, out.assignments);
  return out;
}

Clustering RunDpKMeans(const FeatureMatrix& x, const KMeansParams& params,
                       double epsilon, double sensitivity, Rng& rng) {
  CheckInputs(x, params);
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  Require(std::isfinite(sensitivity) && sensitivity >= 0.0,
          ErrorCode::kInvalidParams, "sensitivity must be non-negative");
  Clustering out;
  out.centroids = InitialCentroids(x, params.k, rng);
  out.assignments.assign(static_cast<std::size_t>(x.rows()), -1);
  const double per_iter_epsilon =
      params.max_iters > 0 ? epsilon / params.max_iters : epsilon;
  for (int t = 0; t < params.max_iters; ++t) {
    AssignAll(x, out.centroids, out.assignments);
    const auto counts = UpdateMeans(x, out.assignments, out.centroids, rng);
    for (Eigen::Index c = 0; c < out.centroids.rows(); ++c) {
      const auto size = std::max<Eigen::Index>(1, counts[static_cast<std::size_t>(c)]);
      const double scale = sensitivity / static_cast<double>(size) / per_iter_epsilon;
      for (Eigen::Index j = 0; j < out.centroids.cols(); ++j) {
        out.centroids(c, j) += rng.Laplace(scale);
      }
    }
    out.iterations = t + 1;
  }
  if (params.max_iters == 0) AssignAll(x, out.centroids, out.assignments);
  return out;
}

std::vector<int> KMeansModel::Assign(const FeatureMatrix& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = NearestCentroid(x.row(i), centroids);
  }
  return out;
}

LabelVector KMeansModel::Predict(const FeatureMatrix& x) const {
  const auto clusters = Assign(x);
  LabelVector out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out(i) = cluster_to_class[static_cast<std::size_t>(clusters[static_cast<std::size_t>(i)])];
  }
  return out;
}

Vector KMeansModel::PredictProba(const FeatureMatrix& x) const {
  Vector p(x.rows());
  const auto k = centroids.rows();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector dist = (centroids.rowwise() - x.row(i)).rowwise().norm();
    const double shift = dist.minCoeff();
    double total = 0.0;
    double positive = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      const double w = std::exp(-(dist(c) - shift));
      total += w;
      if (cluster_to_class[static_cast<std::size_t>(c)] == 1) positive += w;
    }
    p(i) = positive / total;
  }
  return p;
}

Vector KMeansModel::Score(const FeatureMatrix& x) const {
  Vector s(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector dist = (centroids.rowwise() - x.row(i)).rowwise().norm();
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      if (cluster_to_class[static_cast<std::size_t>(c)] == 1) best = std::min(best, dist(c));
    }
    s(i) = -best;
  }
  return s;
}

KMeansModel TrainKMeans(const FeatureMatrix& x, const LabelVector& y,
                        const KMeansParams& params, Rng& rng) {
  Require(x.rows() == y.size(), ErrorCode::kInvalidInput,
          "feature rows and labels must match");
  return WithClassMap(RunKMeans(x, params, rng), y, params.k);
}

KMeansModel DpKMeans(const FeatureMatrix& x, const LabelVector& y,
                     const KMeansParams& params, double epsilon,
                     double sensitivity, Rng& rng) {
  Require(x.rows() == y.size(), ErrorCode::kInvalidInput,
          "feature rows and labels must match");
  return WithClassMap(RunDpKMeans(x, params, epsilon, sensitivity, rng), y,
                      params.k);
}

}  // namespace dphealth::ml
