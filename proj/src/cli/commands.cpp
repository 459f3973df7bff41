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

#include "dphealth/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "dphealth/attacks/attacks.hpp"
#include "dphealth/dp/sensitivity.hpp"
#include "dphealth/ledger/ledger.hpp"
#include "dphealth/ml/experiment.hpp"
#include "dphealth/random.hpp"
#include "dphealth/sim/archsim.hpp"

namespace dphealth::cli {
namespace {

// Stream tags keep the seeds of different commands apart.
constexpr std::uint64_t kAttackStream = 0xA77AC4;
constexpr std::uint64_t kLedgerStream = 0x1ED6E2;
constexpr std::uint64_t kSimStream = 0x51A7;

std::string Fmt(double v, int precision = 6) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

// Shortest round-trip rendering for grid values such as epsilon.
std::string FmtKey(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

std::string SeedList(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream os;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0) os << ';';
    os << std::hex << std::setw(16) << std::setfill('0') << seeds[i];
  }
  return os.str();
}

class CsvFile {
 public:
  CsvFile(const AppConfig& config, const std::string& command, const std::string& name)
      : path_((std::filesystem::path(config.out_dir) / name).string()) {
    out_ << "# dphealth " << command << '\n'
         << "# config_sha256=" << config.sha256 << '\n'
         << "# root_seed=" << config.seed << '\n';
  }

  void Comment(const std::string& key, const std::string& value) {
    out_ << "# " << key << '=' << value << '\n';
  }

  void Row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string Save() {
    std::filesystem::create_directories(std::filesystem::path(path_).parent_path());
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    Require(static_cast<bool>(f), ErrorCode::kInvalidInput, "cannot write " + path_);
    f << out_.str();
    Require(static_cast<bool>(f), ErrorCode::kInvalidInput, "write failed: " + path_);
    return path_;
  }

 private:
  std::string path_;
  std::ostringstream out_;
};

ledger::Digest DigestMatrix(const FeatureMatrix& m) {
  ledger::ByteWriter w;
  w.U64(static_cast<std::uint64_t>(m.rows()));
  w.U64(static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.F64(m(i, j));
  }
  return ledger::Sha256(w.bytes());
}

ledger::Digest DigestReport(const attacks::MetricsReport& r) {
  ledger::ByteWriter w;
  for (double v : {r.accuracy, r.precision, r.recall, r.f1, r.auc}) w.F64(v);
  for (auto c : {r.confusion.tp, r.confusion.tn, r.confusion.fp, r.confusion.fn}) w.I64(c);
  return ledger::Sha256(w.bytes());
}

// Optional audit trail for dp-bench: one reservation and one DPQuery per
// perturbed training run.
class BenchLedger {
 public:
  BenchLedger(const AppConfig& config, const ml::Dataset& data)
      : path_(config.ledger.path), rng_(DeriveSeed(config.seed, kLedgerStream)) {
    if (path_.empty()) return;
    ledger_ = std::make_unique<ledger::BudgetLedger>(
        config.ledger.total_epsilon,
        std::make_shared<ledger::HmacSha256Signer>(LedgerKey(config.ledger)));
    ledger_->Record(ledger::OpType::kDataIngestion, DigestMatrix(data.features),
                    {"dp-bench", ledger::Layer::kCloud, "training data ingestion"}, rng_,
                    ledger::NowNs());
  }

  void Log(const dp::MechanismSpec& spec, const std::string& cell,
           const attacks::MetricsReport& report) {
    if (!ledger_) return;
    const ledger::TxMetadata meta{"dp-bench", ledger::Layer::kCloud, cell};
    const auto token =
        ledger_->PrecheckAndReserve(spec.EpsilonCharge(), meta, rng_, ledger::NowNs());
    ledger_->CommitQuery(token,
                         {spec.EpsilonCharge(), spec.params.delta,
                          std::string(dp::MechanismName(spec.kind)),
                          spec.params.sensitivity},
                         DigestReport(report), meta, rng_, ledger::NowNs());
  }

  std::optional<std::string> Save(nlohmann::ordered_json& summary) {
    if (!ledger_) return std::nullopt;
    ledger::SaveChain(path_, ledger_->total(), ledger_->entries());
    summary["ledger"] = {{"path", path_},
                         {"entries", ledger_->entries().size()},
                         {"spent_epsilon", ledger_->spent()},
                         {"head_hash", ledger::ToHex(ledger_->head_hash())}};
    return path_;
  }

 private:
  std::string path_;
  Rng rng_;
  std::unique_ptr<ledger::BudgetLedger> ledger_;
};

struct CellKey {
  ml::ModelKind model;
  int mechanism;  // -1 for the baseline.
  double epsilon;
  double alpha;
  auto operator<=>(const CellKey&) const = default;
};

class BenchRunner {
 public:
  BenchRunner(const AppConfig& config, const ml::TrainTestSplit& split,
              double sensitivity, BenchLedger& ledger)
      : config_(config), split_(split), sensitivity_(sensitivity), ledger_(ledger) {}

  const ml::ExperimentResult& Baseline(ml::ModelKind model) {
    return Run({model, -1, 0.0, 0.0}, std::nullopt);
  }

  const ml::ExperimentResult& Private(ml::ModelKind model, dp::MechanismKind mech,
                                      double epsilon, double alpha) {
    const auto spec =
        MakeMechanism(mech, epsilon, config_.bench.delta, sensitivity_, alpha);
    const bool uses_alpha = mech == dp::MechanismKind::kHybridWeighted ||
                            mech == dp::MechanismKind::kHybridSplit;
    return Run({model, static_cast<int>(mech), epsilon, uses_alpha ? alpha : 0.0}, spec);
  }

 private:
  const ml::ExperimentResult& Run(const CellKey& key,
                                  const std::optional<dp::MechanismSpec>& spec) {
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::string cell = "model=" + std::string(ml::ModelName(key.model));
    if (spec) {
      cell += " mechanism=" + std::string(dp::MechanismName(spec->kind)) +
              " epsilon=" + FmtKey(key.epsilon) + " alpha=" + FmtKey(key.alpha);
    } else {
      cell += " baseline";
    }
    try {
      auto result = ml::RunInputPerturbationExperiment(
          split_, key.model, spec, config_.bench.runs, config_.seed, config_.bench.hyper);
      if (spec) {
        for (const auto& r : result.runs) ledger_.Log(*spec, cell, r);
      }
      return cache_.emplace(key, std::move(result)).first->second;
    } catch (const Error& e) {
      Fail(e.code(), "cell " + cell + ": " + e.what());
    }
  }

  const AppConfig& config_;
  const ml::TrainTestSplit& split_;
  double sensitivity_;
  BenchLedger& ledger_;
  std::map<CellKey, ml::ExperimentResult> cache_;
};

std::vector<std::string> MetricCells(const attacks::MetricsReport& r) {
  return {Fmt(r.accuracy), Fmt(r.precision), Fmt(r.recall), Fmt(r.f1), Fmt(r.auc)};
}

AttackPoint Aggregate(std::optional<double> epsilon, std::vector<double> scores) {
  AttackPoint p;
  p.epsilon = epsilon;
  double sum = 0.0;
  for (double s : scores) sum += s;
  p.mean = sum / static_cast<double>(scores.size());
  double ss = 0.0;
  for (double s : scores) ss += (s - p.mean) * (s - p.mean);
  p.std = scores.size() > 1 ? std::sqrt(ss / static_cast<double>(scores.size() - 1)) : 0.0;
  p.scores = std::move(scores);
  return p;
}

}  // namespace

ledger::Bytes LedgerKey(const LedgerConfig& config) {
  if (!config.key_hex.empty()) return ledger::FromHex(config.key_hex);
  const auto d = ledger::Sha256(std::string_view("dphealth development signing key"));
  return ledger::Bytes(d.begin(), d.end());
}

LoadedData LoadData(const DataConfig& config) {
  LoadedData out;
  ml::Dataset raw;
  if (config.synthetic || config.path.empty()) {
    raw = ml::GenerateSynthetic(config.generator);
    out.synthetic = true;
    out.source = "synthetic(rows=" + std::to_string(config.generator.rows) +
                 ";positives=" + std::to_string(config.generator.positives) +
                 ";seed=" + std::to_string(config.generator.seed) + ")";
  } else {
    raw = ml::ReadCsv(config.path, config.csv);
    out.source = config.path;
  }
  out.data = ml::Preprocess(raw);
  return out;
}

double ExperimentSensitivity(const ml::Dataset& data, const BenchConfig& config) {
  if (config.sensitivity) {
    Require(*config.sensitivity >= 0.0 && std::isfinite(*config.sensitivity),
            ErrorCode::kConfigError, "experiment.sensitivity must be non-negative");
    return *config.sensitivity;
  }
  return dp::ComputeSensitivity(data.features, config.sensitivity_percentile).delta;
}

bool NonDecreasing(const std::vector<double>& values) {
  return std::is_sorted(values.begin(), values.end());
}

AttackCurves ComputeAttackCurves(const ml::Dataset& data, const AttackConfig& attack,
                                 double dp_delta, double sensitivity,
                                 std::uint64_t root_seed) {
  AttackCurves c;
  c.sensitivity = sensitivity;
  c.target_column = data.FeatureIndex(attack.target_column);
  const FeatureMatrix& x = data.features;
  const FeatureMatrix clipped = dp::ClipRows(x, sensitivity);

  c.reconstruction_baseline =
      Aggregate(std::nullopt, {attacks::ReconstructionCorrelation(x, x).score});
  c.inference_baseline = Aggregate(
      std::nullopt, {attacks::AttributeInferenceAttack(x, x, c.target_column).score});

  const std::uint64_t stream = DeriveSeed(root_seed, kAttackStream);
  for (int s = 0; s < attack.seeds; ++s) {
    c.seeds.push_back(DeriveSeed(stream, static_cast<std::uint64_t>(s)));
  }
  for (double eps : attack.epsilons) {
    const auto spec = MakeMechanism(attack.mechanism, eps, dp_delta, sensitivity, attack.alpha);
    std::vector<double> recon;
    std::vector<double> infer;
    for (std::uint64_t seed : c.seeds) {
      Rng rng(seed);
      const FeatureMatrix released = dp::PerturbMatrix(clipped, spec, rng);
      recon.push_back(attacks::ReconstructionCorrelation(x, released).score);
      infer.push_back(attacks::AttributeInferenceAttack(x, released, c.target_column).score);
    }
    c.reconstruction.push_back(Aggregate(eps, std::move(recon)));
    c.inference.push_back(Aggregate(eps, std::move(infer)));
  }
  return c;
}

CommandResult CmdDpBench(const AppConfig& config) {
  const BenchConfig& b = config.bench;
  const LoadedData loaded = LoadData(config.data);
  const double sensitivity = ExperimentSensitivity(loaded.data, b);
  const ml::TrainTestSplit split = ml::SplitAndBalance(loaded.data, b.split);
  BenchLedger ledger(config, loaded.data);
  BenchRunner runner(config, split, sensitivity, ledger);

  auto header = [&](CsvFile& f) {
    f.Comment("data_source", loaded.source);
    f.Comment("sensitivity", Fmt(sensitivity, 9));
    f.Comment("runs", std::to_string(b.runs));
    f.Comment("train_rows", std::to_string(split.train.rows()));
    f.Comment("test_rows", std::to_string(split.test.rows()));
  };
  CommandResult result;

  CsvFile t2(config, "dp-bench", "table_II.csv");
  header(t2);
  t2.Row({"model", "accuracy", "precision", "recall", "f1", "auc", "tp", "tn", "fp", "fn",
          "seeds"});
  for (ml::ModelKind m : b.models) {
    const auto& r = runner.Baseline(m);
    auto row = MetricCells(r.mean);
    row.insert(row.begin(), std::string(ml::ModelName(m)));
    for (auto c : {r.mean.confusion.tp, r.mean.confusion.tn, r.mean.confusion.fp,
                   r.mean.confusion.fn}) {
      row.push_back(std::to_string(c));
    }
    row.push_back(SeedList(r.run_seeds));
    t2.Row(row);
  }
  result.files.push_back(t2.Save());

  CsvFile t3(config, "dp-bench", "table_III.csv");
  header(t3);
  t3.Comment("hybrid_alpha", FmtKey(b.alpha));
  t3.Row({"model", "mechanism", "epsilon", "accuracy", "seeds"});
  for (ml::ModelKind m : b.models) {
    for (dp::MechanismKind k : b.mechanisms) {
      for (double eps : b.epsilons) {
        const auto& r = runner.Private(m, k, eps, b.alpha);
        t3.Row({std::string(ml::ModelName(m)), std::string(dp::MechanismName(k)),
                FmtKey(eps), Fmt(r.mean.accuracy), SeedList(r.run_seeds)});
      }
    }
  }
  result.files.push_back(t3.Save());

  CsvFile t4(config, "dp-bench", "table_IV.csv");
  header(t4);
  t4.Row({"model", "mechanism", "epsilon", "accuracy", "precision", "recall", "f1", "auc",
          "seeds"});
  for (ml::ModelKind m : b.models) {
    for (dp::MechanismKind k : b.mechanisms) {
      const auto& r = runner.Private(m, k, b.metrics_epsilon, b.alpha);
      auto row = MetricCells(r.mean);
      row.insert(row.begin(), {std::string(ml::ModelName(m)),
                               std::string(dp::MechanismName(k)), FmtKey(b.metrics_epsilon)});
      row.push_back(SeedList(r.run_seeds));
      t4.Row(row);
    }
  }
  result.files.push_back(t4.Save());

  CsvFile t5(config, "dp-bench", "table_V.csv");
  header(t5);
  std::vector<std::string> cols{"model", "mechanism", "epsilon"};
  for (double a : b.alphas) cols.push_back("alpha_" + FmtKey(a));
  cols.insert(cols.end(), {"best_alpha", "seeds"});
  t5.Row(cols);
  for (ml::ModelKind m : b.models) {
    std::vector<std::string> row{std::string(ml::ModelName(m)), "hybrid",
                                 FmtKey(b.alpha_sweep_epsilon)};
    double best = -1.0;
    double best_alpha = b.alphas.front();
    std::vector<std::uint64_t> seeds;
    for (double a : b.alphas) {
      const auto& r = runner.Private(m, dp::MechanismKind::kHybridWeighted,
                                     b.alpha_sweep_epsilon, a);
      row.push_back(Fmt(r.mean.accuracy));
      // First maximum wins.
      if (r.mean.accuracy > best) {
        best = r.mean.accuracy;
        best_alpha = a;
      }
      seeds = r.run_seeds;
    }
    row.push_back(FmtKey(best_alpha));
    row.push_back(SeedList(seeds));
    t5.Row(row);
  }
  result.files.push_back(t5.Save());

  result.summary["command"] = "dp-bench";
  result.summary["config_sha256"] = config.sha256;
  result.summary["root_seed"] = config.seed;
  result.summary["data_source"] = loaded.source;
  result.summary["sensitivity"] = sensitivity;
  if (auto path = ledger.Save(result.summary)) result.files.push_back(*path);
  result.summary["files"] = result.files;
  return result;
}

CommandResult CmdAttackEval(const AppConfig& config) {
  const LoadedData loaded = LoadData(config.data);
  const double sensitivity = ExperimentSensitivity(loaded.data, config.bench);
  const AttackCurves c = ComputeAttackCurves(loaded.data, config.attack, config.bench.delta,
                                             sensitivity, config.seed);
  const std::string mech(dp::MechanismName(config.attack.mechanism));
  std::vector<double> recon_means;
  std::vector<double> infer_means;
  for (const auto& p : c.reconstruction) recon_means.push_back(p.mean);
  for (const auto& p : c.inference) infer_means.push_back(p.mean);
  // Trend flags assume the configured grid is in ascending order.
  const bool ascending = NonDecreasing(config.attack.epsilons);
  const bool recon_trend = ascending && NonDecreasing(recon_means);
  const bool infer_trend = ascending && NonDecreasing(infer_means);

  CommandResult result;
  auto write = [&](const std::string& name, const std::string& attack,
                   const AttackPoint& baseline, const std::vector<AttackPoint>& points,
                   bool trend) {
    CsvFile f(config, "attack-eval", name);
    f.Comment("data_source", loaded.source);
    f.Comment("attack", attack);
    f.Comment("target_column", config.attack.target_column);
    f.Comment("sensitivity", Fmt(sensitivity, 9));
    f.Comment("hybrid_alpha", FmtKey(config.attack.alpha));
    f.Comment("seeds", SeedList(c.seeds));
    f.Comment("trend_nondecreasing_in_epsilon", trend ? "true" : "false");
    f.Row({"condition", "mechanism", "epsilon", "mean_score", "std_score", "samples"});
    f.Row({"baseline", "none", "none", Fmt(baseline.mean), Fmt(baseline.std),
           std::to_string(baseline.scores.size())});
    for (const auto& p : points) {
      f.Row({"dp", mech, FmtKey(*p.epsilon), Fmt(p.mean), Fmt(p.std),
             std::to_string(p.scores.size())});
    }
    result.files.push_back(f.Save());
  };
  write("fig6.csv", "attribute_inference", c.inference_baseline, c.inference, infer_trend);
  write("fig7.csv", "reconstruction", c.reconstruction_baseline, c.reconstruction,
        recon_trend);

  result.summary["command"] = "attack-eval";
  result.summary["config_sha256"] = config.sha256;
  result.summary["root_seed"] = config.seed;
  result.summary["data_source"] = loaded.source;
  result.summary["target_column"] = config.attack.target_column;
  result.summary["reconstruction_trend_nondecreasing"] = recon_trend;
  result.summary["inference_trend_nondecreasing"] = infer_trend;
  result.summary["files"] = result.files;
  return result;
}

CommandResult CmdSimulate(const AppConfig& config) {
  const SimConfig& s = config.sim;
  Require(!s.scenarios.empty(), ErrorCode::kConfigError, "simulation.scenarios is empty");
  const std::uint64_t root = DeriveSeed(s.seed, kSimStream);
  CommandResult result;

  auto residual = [](double value, std::optional<double> target) {
    return target ? Fmt(100.0 * (value - *target) / *target, 3) : std::string("");
  };

  CsvFile t6(config, "simulate", "table_VI.csv");
  t6.Comment("trials", std::to_string(s.trials));
  t6.Comment("cloud_includes_iot_hop", s.tiers.cloud_includes_iot_hop ? "true" : "false");
  t6.Row({"scenario", "payload_kb", "edge_mean_ms", "edge_std_ms", "cloud_mean_ms",
          "cloud_std_ms", "speedup", "edge_target_ms", "cloud_target_ms",
          "edge_residual_pct", "cloud_residual_pct", "trials", "edge_seed", "cloud_seed"});
  for (std::size_t i = 0; i < s.scenarios.size(); ++i) {
    const auto& sc = s.scenarios[i];
    const std::uint64_t edge_seed = DeriveSeed(root, 2 * i);
    const std::uint64_t cloud_seed = DeriveSeed(root, 2 * i + 1);
    const auto edge = sim::SimulateScenario(sc, sim::Tier::kEdge, s.tiers, s.trials, edge_seed);
    const auto cloud =
        sim::SimulateScenario(sc, sim::Tier::kCloud, s.tiers, s.trials, cloud_seed);
    t6.Row({sc.name, FmtKey(sc.payload_kb), Fmt(edge.mean, 3), Fmt(edge.std, 3),
            Fmt(cloud.mean, 3), Fmt(cloud.std, 3), Fmt(sim::Speedup(edge, cloud), 3),
            sc.edge_target_ms ? FmtKey(*sc.edge_target_ms) : "",
            sc.cloud_target_ms ? FmtKey(*sc.cloud_target_ms) : "",
            residual(edge.mean, sc.edge_target_ms), residual(cloud.mean, sc.cloud_target_ms),
            std::to_string(s.trials), SeedList({edge_seed}), SeedList({cloud_seed})});
  }
  result.files.push_back(t6.Save());

  CsvFile t7(config, "simulate", "table_VII.csv");
  t7.Comment("trials", std::to_string(s.trials));
  t7.Row({"scenario", "tier", "users", "capacity", "payload_kb", "avg_service_ms",
          "avg_response_ms", "throughput_rps", "target_rps", "residual_pct", "trials",
          "seed"});
  for (std::size_t i = 0; i < s.loads.size(); ++i) {
    const auto& ld = s.loads[i];
    const std::uint64_t seed = DeriveSeed(root, 1000 + i);
    const auto r = sim::SimulateThroughput(ld, s.tiers, s.trials, seed);
    t7.Row({ld.name, std::string(sim::TierName(ld.tier)), std::to_string(ld.users),
            std::to_string(ld.capacity), FmtKey(ld.payload_kb), Fmt(r.mean_service_ms, 3),
            Fmt(r.response.mean, 3), Fmt(r.throughput_rps, 3),
            ld.target_rps ? FmtKey(*ld.target_rps) : "",
            residual(r.throughput_rps, ld.target_rps), std::to_string(s.trials),
            SeedList({seed})});
  }
  result.files.push_back(t7.Save());

  CsvFile t8(config, "simulate", "table_VIII.csv");
  t8.Comment("trials", std::to_string(s.trials));
  t8.Comment("scale_exponent", FmtKey(s.raft.scale_exponent));
  std::vector<std::string> cols{"nodes", "mean_ms", "std_ms", "min_ms", "max_ms", "tps",
                                "target_mean_ms", "target_tps"};
  for (const auto& p : s.raft.phases) cols.push_back(p.name + "_fraction");
  cols.insert(cols.end(), {"trials", "seed"});
  t8.Row(cols);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const int n = s.nodes[i];
    const std::uint64_t seed = DeriveSeed(root, 2000 + i);
    const auto r = sim::SimulateRaft({n, s.raft}, s.trials, seed);
    const auto target = s.raft_targets.find(n);
    std::vector<std::string> row{std::to_string(n), Fmt(r.mean, 3), Fmt(r.std, 3),
                                 Fmt(r.min, 3), Fmt(r.max, 3), Fmt(*r.throughput_rps, 3),
                                 target != s.raft_targets.end() ? FmtKey(target->second.first) : "",
                                 target != s.raft_targets.end() ? FmtKey(target->second.second) : ""};
    for (const auto& [name, frac] : r.breakdown) row.push_back(Fmt(frac, 6));
    row.push_back(std::to_string(s.trials));
    row.push_back(SeedList({seed}));
    t8.Row(row);
  }
  result.files.push_back(t8.Save());

  result.summary["command"] = "simulate";
  result.summary["config_sha256"] = config.sha256;
  result.summary["root_seed"] = config.seed;
  result.summary["files"] = result.files;
  return result;
}

CommandResult CmdLedgerAudit(const AppConfig& config, const std::string& chain_path,
                             const std::optional<std::string>& head_hex) {
  const ledger::ChainFile file = ledger::ReadChainFile(chain_path);
  std::optional<ledger::Digest> head;
  if (head_hex) {
    const ledger::Bytes b = ledger::FromHex(*head_hex);
    Require(b.size() == 32, ErrorCode::kParseError, "head hash must be 32 bytes of hex");
    head.emplace();
    std::copy(b.begin(), b.end(), head->begin());
  }
  const ledger::HmacSha256Signer signer(LedgerKey(config.ledger));
  const ledger::AuditReport report = ledger::AuditChain(file, &signer, head);

  CommandResult result;
  auto& s = result.summary;
  s["command"] = "ledger-audit";
  s["chain"] = chain_path;
  s["valid"] = report.verdict.valid;
  s["first_broken_index"] = report.verdict.first_broken_index
                                ? nlohmann::ordered_json(*report.verdict.first_broken_index)
                                : nlohmann::ordered_json(nullptr);
  s["reason"] = report.verdict.reason;
  if (report.parse_failure) {
    s["parse_error"] = {{"record_index", report.parse_failure->record_index
                                             ? nlohmann::ordered_json(*report.parse_failure->record_index)
                                             : nlohmann::ordered_json(nullptr)},
                        {"byte_offset", report.parse_failure->byte_offset},
                        {"message", report.parse_failure->message}};
  }
  s["entries"] = report.entries;
  s["total_epsilon"] = report.state.total_epsilon;
  s["spent_epsilon"] = report.state.cumulative_spent;
  s["reserved_epsilon"] = report.state.reserved;
  nlohmann::ordered_json by_op = nlohmann::ordered_json::object();
  for (auto op : {ledger::OpType::kDataIngestion, ledger::OpType::kDPQuery,
                  ledger::OpType::kBudgetUpdate, ledger::OpType::kAccessRequest}) {
    const auto eps = report.state.epsilon_by_op.find(op);
    const auto cnt = report.state.count_by_op.find(op);
    by_op[std::string(ledger::OpTypeName(op))] = {
        {"count", cnt == report.state.count_by_op.end() ? 0 : cnt->second},
        {"epsilon", eps == report.state.epsilon_by_op.end() ? 0.0 : eps->second}};
  }
  s["by_op_type"] = by_op;
  s["head_hash"] = ledger::ToHex(report.head_hash);
  return result;
}

}  // namespace dphealth::cli
