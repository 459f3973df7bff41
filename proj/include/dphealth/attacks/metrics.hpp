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

#ifndef DPHEALTH_ATTACKS_METRICS_HPP_
#define DPHEALTH_ATTACKS_METRICS_HPP_

#include <cstdint>
#include <vector>

#include "dphealth/common.hpp"

namespace dphealth::attacks {

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
  Confusion& operator+=(const Confusion& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.5;
  Confusion confusion;
};

Confusion CountConfusion(const LabelVector& predictions, const LabelVector& labels);

// Accuracy, precision, recall and F1 from counts alone. A ratio with a zero
// denominator is reported as 0.
MetricsReport FromConfusion(const Confusion& c);

// Area under the ROC curve as the Mann-Whitney statistic with midranks for
// tied scores. Returns 0.5 when either class is absent.
double RocAuc(const Vector& scores, const LabelVector& labels);

MetricsReport Evaluate(const LabelVector& predictions, const Vector& scores,
                       const LabelVector& labels);

// Confusion counts are pooled, so accuracy equals the pooled ratio exactly.
// Precision, recall, F1 and AUC are arithmetic means over the reports.
MetricsReport Average(const std::vector<MetricsReport>& reports);

}  // namespace dphealth::attacks

#endif  // DPHEALTH_ATTACKS_METRICS_HPP_
