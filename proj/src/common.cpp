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

#include "dphealth/common.hpp"

#include <cmath>
#include <numbers>

#include "dphealth/random.hpp"

namespace dphealth {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kBudgetExhausted: return "BudgetExhausted";
    case ErrorCode::kIngestError: return "IngestError";
    case ErrorCode::kSplitError: return "SplitError";
    case ErrorCode::kTrainError: return "TrainError";
    case ErrorCode::kUnsupported: return "Unsupported";
    case ErrorCode::kAttackError: return "AttackError";
    case ErrorCode::kSignatureError: return "SignatureError";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("UniformInt: n must be positive");
  // Reject the low values that would bias x % n.
  const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % n;
}

double Rng::StandardNormal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = UniformOpen();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double Rng::Laplace(double scale) {
  if (scale == 0.0) {
    // Keep the stream position independent of the scale.
    (void)engine_();
    return 0.0;
  }
  const double u = UniformOpen() - 0.5;
  const double sign = u < 0.0 ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

}  // namespace dphealth
