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

#ifndef DPHEALTH_ML_KMEANS_HPP_
#define DPHEALTH_ML_KMEANS_HPP_

#include <vector>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

// Largest k accepted by the exhaustive cluster-to-class search (8! = 40320).
inline constexpr int kMaxMappedClusters = 8;

struct KMeansParams {
  int k = 2;
  int max_iters = 100;
};

struct Clustering {
  // k x d.
  FeatureMatrix centroids;
  std::vector<int> assignments;
  int iterations = 0;
};

struct KMeansModel {
  FeatureMatrix centroids;
  // cluster index -> class label, a permutation of 0..k-1.
  std::vector<int> cluster_to_class;

  std::vector<int> Assign(const FeatureMatrix& x) const;
  LabelVector Predict(const FeatureMatrix& x) const;
  // Class-1 probability: softmax over negative centroid distances, summed
  // over the clusters mapped to class 1.
  Vector PredictProba(const FeatureMatrix& x) const;
  // Ranking score: negative distance to the nearest class-1 centroid.
  Vector Score(const FeatureMatrix& x) const;
};

template <typename DerivedA, typename DerivedB>
int NearestCentroid(const Eigen::MatrixBase<DerivedA>& row,
                    const Eigen::MatrixBase<DerivedB>& centroids) {
  Eigen::Index best = 0;
  (centroids.rowwise() - row).rowwise().squaredNorm().minCoeff(&best);
  return static_cast<int>(best);
}

// Label permutation maximizing agreement between clusters and labels, found
// by exhaustive search in lexicographic order (first maximum wins).
// Labels must lie in [0, k). Throws kUnsupported for k > 8.
std::vector<int> MapClustersToClasses(const std::vector<int>& assignments,
                                      const LabelVector& labels, int k);

// Lloyd iterations from k distinct random data points; stops early once
// assignments are stable.
Clustering RunKMeans(const FeatureMatrix& x, const KMeansParams& params, Rng& rng);

// Runs all max_iters iterations; after each mean update every centroid
// coordinate receives Lap(sensitivity / (|S_i| * epsilon / max_iters)).
Clustering RunDpKMeans(const FeatureMatrix& x, const KMeansParams& params,
                       double epsilon, double sensitivity, Rng& rng);

KMeansModel TrainKMeans(const FeatureMatrix& x, const LabelVector& y,
                        const KMeansParams& params, Rng& rng);
KMeansModel DpKMeans(const FeatureMatrix& x, const LabelVector& y,
                     const KMeansParams& params, double epsilon,
                     double sensitivity, Rng& rng);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_KMEANS_HPP_
