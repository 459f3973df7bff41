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

#ifndef DPHEALTH_CLI_COMMANDS_HPP_
#define DPHEALTH_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dphealth/attacks/metrics.hpp"
#include "dphealth/cli/config.hpp"
#include "dphealth/ledger/crypto.hpp"
#include "dphealth/ml/dataset.hpp"

namespace dphealth::cli {

struct LoadedData {
  // Standardized features.
  ml::Dataset data;
  // "synthetic(...)" or the CSV path.
  std::string source;
  bool synthetic = false;
};

LoadedData LoadData(const DataConfig& config);

// Sensitivity used by the experiments: the configured override, else the
// nearest-rank percentile of standardized record norms.
double ExperimentSensitivity(const ml::Dataset& data, const BenchConfig& config);

struct AttackPoint {
  std::optional<double> epsilon;
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> scores;
};

struct AttackCurves {
  double sensitivity = 0.0;
  Eigen::Index target_column = 0;
  AttackPoint inference_baseline;
  AttackPoint reconstruction_baseline;
  // Ordered as AttackConfig::epsilons.
  std::vector<AttackPoint> inference;
  std::vector<AttackPoint> reconstruction;
  std::vector<std::uint64_t> seeds;
};

// Releases clip(X, sensitivity) + noise per (epsilon, seed) and scores both
// attacks against the standardized original. Seed s is shared across
// epsilons.
AttackCurves ComputeAttackCurves(const ml::Dataset& data, const AttackConfig& attack,
                                 double dp_delta, double sensitivity,
                                 std::uint64_t root_seed);

// True if values never decrease from one entry to the next.
bool NonDecreasing(const std::vector<double>& values);

struct CommandResult {
  std::vector<std::string> files;
  nlohmann::ordered_json summary;
};

CommandResult CmdDpBench(const AppConfig& config);
CommandResult CmdAttackEval(const AppConfig& config);
CommandResult CmdSimulate(const AppConfig& config);
// `head_hex` is an optional anchored head hash for truncation detection.
CommandResult CmdLedgerAudit(const AppConfig& config, const std::string& chain_path,
                             const std::optional<std::string>& head_hex);

// Signing key from config, or a fixed development key when unset.
ledger::Bytes LedgerKey(const LedgerConfig& config);

}  // namespace dphealth::cli

#endif  // DPHEALTH_CLI_COMMANDS_HPP_
