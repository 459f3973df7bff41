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

#ifndef DPHEALTH_COMMON_HPP_
#define DPHEALTH_COMMON_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace dphealth {

// Dense storage used throughout. Records are rows, features are columns.
template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using FeatureMatrix = MatrixX<double>;
using Vector = VectorX<double>;
using LabelVector = VectorX<int>;

enum class ErrorCode {
  kInvalidInput,
  kInvalidParams,
  kBudgetExhausted,
  kIngestError,
  kSplitError,
  kTrainError,
  kUnsupported,
  kAttackError,
  kSignatureError,
  kProtocolError,
  kParseError,
  kConfigError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

template <typename Derived>
bool AllFinite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

}  // namespace dphealth

#endif  // DPHEALTH_COMMON_HPP_
