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

// dphealth: experiment runner for the differential-privacy toolkit.
//
//   dphealth dp-bench     --synthetic --seed 42 --out out
//   dphealth attack-eval  --target-col cd40
//   dphealth simulate
//   dphealth ledger-audit --ledger out/ledger.bin
//
// Exit code 0 on success. On failure a JSON object
// {"error": {"code": ..., "message": ...}} is written to stderr.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dphealth/cli/commands.hpp"
#include "dphealth/cli/config.hpp"
#include "dphealth/common.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvalidChain = 3;

int ReportError(std::string_view code, const std::string& message, int exit_code) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << '\n';
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-privacy healthcare analytics toolkit"};
  app.require_subcommand(1);

  std::string config_path = dphealth::cli::DefaultConfigPath();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> dataset;
  std::optional<std::string> target_col;
  std::optional<std::string> ledger_path;
  std::optional<std::string> head_hex;
  bool synthetic = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (comments allowed)");
    cmd->add_option("--seed", seed, "Root seed (u64)");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--dataset", dataset, "Dataset CSV path");
    cmd->add_flag("--synthetic", synthetic, "Use the bundled synthetic generator");
  };

  auto* bench = app.add_subcommand("dp-bench", "Tables II-V: DP model benchmark");
  add_common(bench);
  bench->add_option("--ledger", ledger_path, "Record budget spending to this chain file");

  auto* attack = app.add_subcommand("attack-eval", "Fig. 6-7 data: attack curves");
  add_common(attack);
  attack->add_option("--target-col", target_col, "Sensitive attribute for inference");

  auto* simulate = app.add_subcommand("simulate", "Tables VI-VIII: architecture model");
  add_common(simulate);

  auto* audit = app.add_subcommand("ledger-audit", "Verify a budget ledger chain file");
  add_common(audit);
  audit->add_option("--ledger", ledger_path, "Chain file to audit")->required();
  audit->add_option("--head", head_hex, "Anchored head hash (hex) to detect truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("UsageError", e.what(), kExitUsage);
  }

  try {
    dphealth::cli::Overrides overrides;
    overrides.seed = seed;
    overrides.out_dir = out_dir;
    overrides.dataset = dataset;
    overrides.target_column = target_col;
    overrides.synthetic = synthetic;
    if (bench->parsed()) overrides.ledger_path = ledger_path;
    const auto config = dphealth::cli::LoadConfig(config_path, overrides);

    dphealth::cli::CommandResult result;
    if (bench->parsed()) {
      result = dphealth::cli::CmdDpBench(config);
    } else if (attack->parsed()) {
      result = dphealth::cli::CmdAttackEval(config);
    } else if (simulate->parsed()) {
      result = dphealth::cli::CmdSimulate(config);
    } else {
      result = dphealth::cli::CmdLedgerAudit(config, *ledger_path, head_hex);
      std::cout << result.summary.dump(2) << '\n';
      if (!result.summary["valid"].get<bool>()) {
        return ReportError("ChainInvalid", result.summary["reason"].get<std::string>(),
                           kExitInvalidChain);
      }
      return 0;
    }
    std::cout << result.summary.dump(2) << '\n';
    return 0;
  } catch (const dphealth::Error& e) {
    return ReportError(dphealth::ErrorCodeName(e.code()), e.what(), kExitError);
  } catch (const std::exception& e) {
    return ReportError("InternalError", e.what(), kExitError);
  }
}
