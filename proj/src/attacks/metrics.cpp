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

#include "dphealth/attacks/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace dphealth::attacks {
namespace {

double Ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void CheckLabels(const LabelVector& labels) {
  Require(labels.size() > 0, ErrorCode::kInvalidInput, "empty label vector");
  Require(((labels.array() == 0) || (labels.array() == 1)).all(),
          ErrorCode::kInvalidInput, "labels must be binary");
}

}  // namespace

Confusion CountConfusion(const LabelVector& predictions, const LabelVector& labels) {
  CheckLabels(labels);
  Require(predictions.size() == labels.size(), ErrorCode::kInvalidInput,
          "predictions and labels differ in length");
  Confusion c;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions(i) == 1;
    if (labels(i) == 1) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

MetricsReport FromConfusion(const Confusion& c) {
  MetricsReport r;
  r.confusion = c;
  r.accuracy = Ratio(c.tp + c.tn, c.total());
  r.precision = Ratio(c.tp, c.tp + c.fp);
  r.recall = Ratio(c.tp, c.tp + c.fn);
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

double RocAuc(const Vector& scores, const LabelVector& labels) {
  CheckLabels(labels);
  Require(scores.size() == labels.size(), ErrorCode::kInvalidInput,
          "scores and labels differ in length");
  Require(AllFinite(scores), ErrorCode::kInvalidInput, "non-finite scores");
  const auto n = static_cast<std::size_t>(scores.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) < scores(static_cast<Eigen::Index>(b));
  });
  double positive_rank_sum = 0.0;
  std::int64_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    const double s = scores(static_cast<Eigen::Index>(order[i]));
    while (j < n && scores(static_cast<Eigen::Index>(order[j])) == s) ++j;
    // Ranks are 1-based; ties share the mean of ranks i+1..j.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels(static_cast<Eigen::Index>(order[k])) == 1) {
        positive_rank_sum += midrank;
        ++positives;
      }
    }
    i = j;
  }
  const auto negatives = static_cast<std::int64_t>(n) - positives;
  if (positives == 0 || negatives == 0) return 0.5;
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) /
         (p * static_cast<double>(negatives));
}

MetricsReport Evaluate(const LabelVector& predictions, const Vector& scores,
                       const LabelVector& labels) {
  MetricsReport r = FromConfusion(CountConfusion(predictions, labels));
  r.auc = RocAuc(scores, labels);
  return r;
}

MetricsReport Average(const std::vector<MetricsReport>& reports) {
  Require(!reports.empty(), ErrorCode::kInvalidInput, "nothing to average");
  Confusion pooled;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  for (const auto& r : reports) {
    pooled += r.confusion;
    precision += r.precision;
    recall += r.recall;
    f1 += r.f1;
    auc += r.auc;
  }
  const double n = static_cast<double>(reports.size());
  MetricsReport out = FromConfusion(pooled);
  out.precision = precision / n;
  out.recall = recall / n;
  out.f1 = f1 / n;
  out.auc = auc / n;
  return out;
}

}  // namespace dphealth::attacks
