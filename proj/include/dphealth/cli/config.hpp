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

#ifndef DPHEALTH_CLI_CONFIG_HPP_
#define DPHEALTH_CLI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dphealth/dp/mechanism.hpp"
#include "dphealth/ml/dataset.hpp"
#include "dphealth/ml/model.hpp"
#include "dphealth/sim/archsim.hpp"

namespace dphealth::cli {

// Command-line overrides applied on top of the config file before hashing.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> dataset;
  std::optional<std::string> target_column;
  bool synthetic = false;
  std::optional<std::string> ledger_path;
};

struct DataConfig {
  // Empty path or `synthetic` selects the bundled generator.
  std::string path;
  bool synthetic = false;
  ml::CsvOptions csv;
  ml::SyntheticSpec generator;
};

struct BenchConfig {
  std::vector<double> epsilons;
  std::vector<double> alphas;
  std::vector<dp::MechanismKind> mechanisms;
  std::vector<ml::ModelKind> models;
  int runs = 5;
  double delta = dp::kDefaultDelta;
  double sensitivity_percentile = 0.95;
  // Replaces the data-derived sensitivity when set.
  std::optional<double> sensitivity;
  double alpha = 0.5;
  double metrics_epsilon = 10.0;
  double alpha_sweep_epsilon = 10.0;
  ml::SplitSpec split;
  ml::Hyperparams hyper;
};

struct AttackConfig {
  std::vector<double> epsilons;
  int seeds = 20;
  dp::MechanismKind mechanism = dp::MechanismKind::kHybridWeighted;
  double alpha = 0.5;
  std::string target_column = "cd40";
};

struct LedgerConfig {
  // Empty disables ledger logging.
  std::string path;
  double total_epsilon = 5000.0;
  std::string key_hex;
};

struct SimConfig {
  int trials = 100;
  // Root seed of the run.
  std::uint64_t seed = 0;
  sim::TierConfig tiers;
  std::vector<sim::ScenarioSpec> scenarios;
  std::vector<sim::LoadSpec> loads;
  sim::RaftModel raft;
  std::vector<int> nodes;
  // Reference (mean, tps) per node count, for residual columns.
  std::map<int, std::pair<double, double>> raft_targets;
};

struct AppConfig {
  // Config after overrides; `sha256` is over its canonical dump.
  nlohmann::json resolved;
  std::string sha256;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  DataConfig data;
  BenchConfig bench;
  AttackConfig attack;
  LedgerConfig ledger;
  SimConfig sim;
};

// Path of the config shipped with the sources.
std::string DefaultConfigPath();

// Parses JSON with comments allowed. Errors are kConfigError naming the key.
AppConfig ParseConfig(nlohmann::json doc, const Overrides& overrides);
AppConfig LoadConfig(const std::string& path, const Overrides& overrides);

dp::MechanismSpec MakeMechanism(dp::MechanismKind kind, double epsilon, double delta,
                                double sensitivity, double alpha);

}  // namespace dphealth::cli

#endif  // DPHEALTH_CLI_CONFIG_HPP_
