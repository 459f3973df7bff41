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

#ifndef DPHEALTH_DP_SENSITIVITY_HPP_
#define DPHEALTH_DP_SENSITIVITY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dphealth/common.hpp"

namespace dphealth::dp {

// Rows whose norm exceeds the bound by less than this relative margin are
// treated as inside the ball, which makes clipping idempotent under
// floating-point rescaling.
inline constexpr double kClipRelativeTolerance = 1e-12;

template <typename Derived>
VectorX<typename Derived::Scalar> RowNorms(const Eigen::MatrixBase<Derived>& m) {
  return m.rowwise().norm();
}

// Nearest-rank quantile: the ceil(q * n)-th smallest value, q in (0, 1].
template <typename T>
T NearestRankQuantile(std::vector<T> values, double q) {
  Require(!values.empty(), ErrorCode::kInvalidInput, "quantile of empty set");
  Require(q > 0.0 && q <= 1.0, ErrorCode::kInvalidParams,
          "quantile must lie in (0, 1]");
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

// Projects every row onto the L2 ball of radius `bound`. Rows already inside
// are returned untouched.
template <typename Derived>
MatrixX<typename Derived::Scalar> ClipRows(const Eigen::MatrixBase<Derived>& m,
                                           typename Derived::Scalar bound) {
  using Scalar = typename Derived::Scalar;
  Require(bound >= Scalar(0), ErrorCode::kInvalidParams,
          "clipping bound must be non-negative");
  MatrixX<Scalar> out = m;
  const Scalar limit = bound * (Scalar(1) + Scalar(kClipRelativeTolerance));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const Scalar norm = out.row(i).norm();
    if (norm > limit) {
      out.row(i) *= bound / norm;
    }
  }
  return out;
}

struct SensitivityResult {
  double delta = 0.0;
  FeatureMatrix clipped;
};

// Sensitivity bound = `percentile` quantile of per-record L2 norms; records
// above it are rescaled onto the ball.
SensitivityResult ComputeSensitivity(const FeatureMatrix& matrix,
                                     double percentile);

}  // namespace dphealth::dp

#endif  // DPHEALTH_DP_SENSITIVITY_HPP_
