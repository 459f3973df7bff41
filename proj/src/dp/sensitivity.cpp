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

#include "dphealth/dp/sensitivity.hpp"

namespace dphealth::dp {

SensitivityResult ComputeSensitivity(const FeatureMatrix& matrix,
                                     double percentile) {
  Require(matrix.rows() > 0 && matrix.cols() > 0, ErrorCode::kInvalidInput,
          "sensitivity of an empty matrix");
  Require(AllFinite(matrix), ErrorCode::kInvalidInput,
          "matrix contains non-finite values");
  Require(percentile > 0.0 && percentile <= 1.0, ErrorCode::kInvalidParams,
          "percentile must lie in (0, 1]");
  const Vector norms = RowNorms(matrix);
  std::vector<double> values(norms.begin(), norms.end());
  SensitivityResult result;
  result.delta = NearestRankQuantile(std::move(values), percentile);
  result.clipped = ClipRows(matrix, result.delta);
  return result;
}

}  // namespace dphealth::dp
