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

#include "dphealth/dp/accountant.hpp"

#include <cmath>

namespace dphealth::dp {

BudgetAccountant::BudgetAccountant(double total_epsilon) : total_(total_epsilon) {
  Require(std::isfinite(total_epsilon) && total_epsilon > 0.0,
          ErrorCode::kInvalidParams, "total budget must be positive");
}

bool BudgetAccountant::CanCharge(double epsilon) const {
  return std::isfinite(epsilon) && epsilon > 0.0 && spent_ + epsilon <= total_;
}

void BudgetAccountant::Charge(const std::string& query_id, double epsilon) {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "charge must be positive");
  if (spent_ + epsilon > total_) {
    Fail(ErrorCode::kBudgetExhausted,
         "query '" + query_id + "' needs " + std::to_string(epsilon) +
             " but only " + std::to_string(total_ - spent_) + " remains");
  }
  entries_.push_back({query_id, epsilon});
  spent_ += epsilon;
}

}  // namespace dphealth::dp
