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

#include "dphealth/attacks/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "dphealth/dp/sensitivity.hpp"
#include "dphealth/random.hpp"

namespace dphealth::attacks {
namespace {

std::uint64_t HashRow(const FeatureMatrix& a, const FeatureMatrix& b, Eigen::Index i) {
  std::uint64_t h = 0x6A09E667F3BCC908ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits = 0;
    if (v == 0.0) v = 0.0;  // -0 and +0 hash alike.
    std::memcpy(&bits, &v, sizeof bits);
    h = MixSeed(h ^ bits);
  };
  for (Eigen::Index j = 0; j < a.cols(); ++j) mix(a(i, j));
  for (Eigen::Index j = 0; j < b.cols(); ++j) mix(b(i, j));
  return h;
}

// Lexicographic comparison of row i and row k across both matrices.
bool RowLess(const FeatureMatrix& a, const FeatureMatrix& b, Eigen::Index i,
             Eigen::Index k) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (a(i, j) != a(k, j)) return a(i, j) < a(k, j);
  }
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    if (b(i, j) != b(k, j)) return b(i, j) < b(k, j);
  }
  return false;
}

FeatureMatrix DropColumn(const FeatureMatrix& m, Eigen::Index col) {
  FeatureMatrix out(m.rows(), m.cols() - 1);
  out.leftCols(col) = m.leftCols(col);
  out.rightCols(m.cols() - col - 1) = m.rightCols(m.cols() - col - 1);
  return out;
}

FeatureMatrix Gather(const FeatureMatrix& m, const std::vector<Eigen::Index>& rows) {
  FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  }
  return out;
}

LabelVector Gather(const LabelVector& v, const std::vector<Eigen::Index>& rows) {
  LabelVector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = v(rows[k]);
  }
  return out;
}

}  // namespace

std::string_view AttackName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kAttributeInference:
      return "attribute_inference";
    case AttackKind::kReconstruction:
      return "reconstruction";
  }
  return "unknown";
}

Adversary LogisticAdversary(const ml::LogisticParams& params) {
  return [params](const FeatureMatrix& train_x, const LabelVector& train_y,
                  const FeatureMatrix& test_x) {
    const Eigen::RowVectorXd mean = train_x.colwise().mean();
    Eigen::RowVectorXd sd =
        ((train_x.rowwise() - mean).array().square().colwise().sum() /
         std::max<double>(1.0, static_cast<double>(train_x.rows() - 1)))
            .sqrt()
            .matrix();
    sd = (sd.array() > 0.0).select(sd, 1.0);
    auto scale = [&](const FeatureMatrix& m) -> FeatureMatrix {
      return (m.rowwise() - mean).array().rowwise() / sd.array();
    };
    const ml::LogisticModel model = ml::TrainLogistic(scale(train_x), train_y, params);
    return LabelVector((model.PredictProba(scale(test_x)).array() > 0.5).cast<int>());
  };
}

LabelVector BinarizeAtMedian(const Vector& column) {
  Require(column.size() > 0, ErrorCode::kInvalidInput, "empty target column");
  const double median = dp::NearestRankQuantile(
      std::vector<double>(column.data(), column.data() + column.size()), 0.5);
  LabelVector y = (column.array() > median).cast<int>();
  if (y.sum() == 0 || y.sum() == y.size()) {
    y = (column.array() >= median).cast<int>();
  }
  Require(y.sum() > 0 && y.sum() < y.size(), ErrorCode::kAttackError,
          "target column is constant");
  return y;
}

AttackReport AttributeInferenceAttack(const FeatureMatrix& original,
                                      const FeatureMatrix& released,
                                      Eigen::Index target_column,
                                      const Adversary& adversary) {
  Require(original.rows() == released.rows() && original.cols() == released.cols(),
          ErrorCode::kInvalidInput, "original and released shapes differ");
  Require(original.cols() >= 2 && original.rows() >= 5, ErrorCode::kInvalidInput,
          "attribute inference needs at least 5 rows and 2 columns");
  Require(target_column >= 0 && target_column < original.cols(),
          ErrorCode::kInvalidInput, "target column out of range");
  Require(AllFinite(original) && AllFinite(released), ErrorCode::kInvalidInput,
          "non-finite input");
  const LabelVector target = BinarizeAtMedian(original.col(target_column));
  const FeatureMatrix features = DropColumn(released, target_column);

  const auto n = original.rows();
  std::vector<std::pair<std::uint64_t, Eigen::Index>> keyed;
  keyed.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    keyed.emplace_back(HashRow(original, released, i), i);
  }
  std::sort(keyed.begin(), keyed.end(), [&](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first < r.first;
    return RowLess(original, released, l.second, r.second);
  });
  const auto n_test = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n)));
  std::vector<Eigen::Index> test_rows;
  std::vector<Eigen::Index> train_rows;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    (k < n_test ? test_rows : train_rows).push_back(keyed[k].second);
  }
  const LabelVector train_y = Gather(target, train_rows);
  Require(train_y.sum() > 0 && train_y.sum() < train_y.size(), ErrorCode::kAttackError,
          "binarized target is constant on the training part");

  const LabelVector predicted =
      adversary(Gather(features, train_rows), train_y, Gather(features, test_rows));
  const LabelVector truth = Gather(target, test_rows);
  Require(predicted.size() == truth.size(), ErrorCode::kAttackError,
          "adversary returned the wrong number of predictions");
  AttackReport report;
  report.kind = AttackKind::kAttributeInference;
  report.score = static_cast<double>((predicted.array() == truth.array()).count()) /
                 static_cast<double>(truth.size());
  return report;
}

double AbsoluteCorrelation(const Vector& a, const Vector& b) {
  Require(a.size() == b.size() && a.size() > 0, ErrorCode::kInvalidInput,
          "correlation needs equal, non-empty columns");
  std::vector<std::pair<double, double>> pairs(static_cast<std::size_t>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    pairs[static_cast<std::size_t>(i)] = {a(i), b(i)};
  }
  std::sort(pairs.begin(), pairs.end());
  const double n = static_cast<double>(pairs.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (const auto& [x, y] : pairs) {
    mean_a += x;
    mean_b += y;
  }
  mean_a /= n;
  mean_b /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (const auto& [x, y] : pairs) {
    const double da = x - mean_a;
    const double db = y - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return std::min(1.0, std::abs(sab) / std::sqrt(saa * sbb));
}

AttackReport ReconstructionCorrelation(const FeatureMatrix& original,
                                       const FeatureMatrix& perturbed) {
  Require(original.rows() == perturbed.rows() && original.cols() == perturbed.cols(),
          ErrorCode::kInvalidInput, "original and perturbed shapes differ");
  Require(original.size() > 0, ErrorCode::kInvalidInput, "empty matrices");
  double total = 0.0;
  int informative = 0;
  for (Eigen::Index j = 0; j < original.cols(); ++j) {
    const auto col = original.col(j);
    if ((col.array() == col(0)).all()) continue;
    total += AbsoluteCorrelation(col, perturbed.col(j));
    ++informative;
  }
  AttackReport report;
  report.kind = AttackKind::kReconstruction;
  report.score = informative > 0 ? total / informative : 0.0;
  return report;
}

}  // namespace dphealth::attacks
