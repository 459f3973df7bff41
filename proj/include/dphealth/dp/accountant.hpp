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

#ifndef DPHEALTH_DP_ACCOUNTANT_HPP_
#define DPHEALTH_DP_ACCOUNTANT_HPP_

#include <string>
#include <vector>

#include "dphealth/dp/mechanism.hpp"

namespace dphealth::dp {

struct BudgetCharge {
  std::string query_id;
  double epsilon = 0.0;
};

// Sequential-composition accountant. Single writer; callers serialize
// charges.
class BudgetAccountant {
 public:
  explicit BudgetAccountant(double total_epsilon);

  // Adds `epsilon` to the spent total. Throws kBudgetExhausted, leaving the
  // accountant unchanged, if the total would be exceeded.
  void Charge(const std::string& query_id, double epsilon);

  // Charges the full budget of one mechanism application.
  void Charge(const std::string& query_id, const MechanismSpec& spec) {
    Charge(query_id, spec.EpsilonCharge());
  }

  bool CanCharge(double epsilon) const;

  double total() const { return total_; }
  double spent() const { return spent_; }
  double remaining() const { return total_ - spent_; }
  const std::vector<BudgetCharge>& entries() const { return entries_; }

 private:
  double total_;
  double spent_ = 0.0;
  std::vector<BudgetCharge> entries_;
};

}  // namespace dphealth::dp

#endif  // DPHEALTH_DP_ACCOUNTANT_HPP_
