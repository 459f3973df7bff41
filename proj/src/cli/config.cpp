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

#include "dphealth/cli/config.hpp"

#include <fstream>
#include <sstream>

#include "dphealth/ledger/crypto.hpp"

#ifndef DPHEALTH_SOURCE_DIR
#define DPHEALTH_SOURCE_DIR "."
#endif

namespace dphealth::cli {
namespace {

using nlohmann::json;

// Reads `key` from `obj` (path is for error messages), or returns `fallback`
// when absent.
template <typename T>
T Get(const json& obj, const std::string& path, const char* key, T fallback) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfigError, path + "." + key + ": " + e.what());
  }
}

const json& Section(const json& doc, const char* key) {
  static const json kEmpty = json::object();
  if (!doc.contains(key)) return kEmpty;
  const json& s = doc.at(key);
  Require(s.is_object(), ErrorCode::kConfigError, std::string(key) + " must be an object");
  return s;
}

sim::Range GetRange(const json& obj, const std::string& path, const char* key,
                    sim::Range fallback) {
  if (!obj.contains(key)) return fallback;
  const auto v = Get<std::vector<double>>(obj, path, key, {});
  Require(v.size() == 2, ErrorCode::kConfigError, path + "." + key + ": expected [lo, hi]");
  sim::Range r{v[0], v[1]};
  r.Validate(path + "." + key);
  return r;
}

std::optional<double> GetOptional(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return Get<double>(obj, path, key, 0.0);
}

void ParseHyper(const json& h, ml::Hyperparams& hp) {
  const json& rf = Section(h, "rf");
  hp.rf.trees = Get(rf, "hyperparams.rf", "trees", hp.rf.trees);
  hp.rf.max_depth = Get(rf, "hyperparams.rf", "max_depth", hp.rf.max_depth);
  hp.rf.min_samples_split = Get(rf, "hyperparams.rf", "min_samples_split", hp.rf.min_samples_split);
  hp.rf.min_samples_leaf = Get(rf, "hyperparams.rf", "min_samples_leaf", hp.rf.min_samples_leaf);
  hp.rf.max_features = Get(rf, "hyperparams.rf", "max_features", hp.rf.max_features);
  hp.rf.bootstrap = Get(rf, "hyperparams.rf", "bootstrap", hp.rf.bootstrap);
  const json& lr = Section(h, "lr");
  hp.lr.inverse_l2 = Get(lr, "hyperparams.lr", "inverse_l2", hp.lr.inverse_l2);
  hp.lr.max_iters = Get(lr, "hyperparams.lr", "max_iters", hp.lr.max_iters);
  hp.lr.learning_rate = Get(lr, "hyperparams.lr", "learning_rate", hp.lr.learning_rate);
  const json& km = Section(h, "kmeans");
  hp.kmeans.k = Get(km, "hyperparams.kmeans", "k", hp.kmeans.k);
  hp.kmeans.max_iters = Get(km, "hyperparams.kmeans", "max_iters", hp.kmeans.max_iters);
  const json& nb = Section(h, "nb");
  hp.nb.variance_floor = Get(nb, "hyperparams.nb", "variance_floor", hp.nb.variance_floor);
  hp.nb.probability_floor =
      Get(nb, "hyperparams.nb", "probability_floor", hp.nb.probability_floor);
  const auto likelihood = Get<std::string>(nb, "hyperparams.nb", "likelihood", "gaussian");
  Require(likelihood == "gaussian" || likelihood == "bernoulli", ErrorCode::kConfigError,
          "hyperparams.nb.likelihood must be gaussian or bernoulli");
  hp.nb.likelihood = likelihood == "gaussian" ? ml::NbLikelihood::kGaussian
                                              : ml::NbLikelihood::kBernoulli;
  Require(hp.rf.trees > 0 && hp.rf.max_depth > 0 && hp.rf.min_samples_split > 0 &&
              hp.rf.min_samples_leaf > 0 && hp.lr.max_iters > 0 && hp.kmeans.k >= 2 &&
              hp.kmeans.max_iters > 0 && hp.nb.variance_floor > 0.0,
          ErrorCode::kConfigError, "hyperparameter counts must be positive");
}

void ParseSim(const json& s, SimConfig& sim) {
  sim.trials = Get(s, "simulation", "trials", sim.trials);
  Require(sim.trials >= 1, ErrorCode::kConfigError, "simulation.trials must be >= 1");

  const json& t = Section(s, "tiers");
  sim.tiers.iot_edge_ms = GetRange(t, "simulation.tiers", "iot_edge_ms", sim.tiers.iot_edge_ms);
  sim.tiers.edge_cloud_ms =
      GetRange(t, "simulation.tiers", "edge_cloud_ms", sim.tiers.edge_cloud_ms);
  sim.tiers.edge_bandwidth = Get(t, "simulation.tiers", "edge_bandwidth_mb_s", sim.tiers.edge_bandwidth);
  sim.tiers.cloud_path_bandwidth =
      Get(t, "simulation.tiers", "cloud_path_bandwidth_mb_s", sim.tiers.cloud_path_bandwidth);
  sim.tiers.cloud_includes_iot_hop =
      Get(t, "simulation.tiers", "cloud_includes_iot_hop", sim.tiers.cloud_includes_iot_hop);
  sim.tiers.Validate();

  for (const json& j : s.value("scenarios", json::array())) {
    sim::ScenarioSpec sc;
    sc.name = Get<std::string>(j, "simulation.scenarios", "name", "");
    const std::string path = "simulation.scenarios[" + sc.name + "]";
    sc.payload_kb = Get(j, path, "payload_kb", sc.payload_kb);
    sc.edge_proc_ms = GetRange(j, path, "edge_proc_ms", {});
    sc.cloud_proc_ms = GetRange(j, path, "cloud_proc_ms", {});
    sc.edge_target_ms = GetOptional(j, path, "edge_target_ms");
    sc.cloud_target_ms = GetOptional(j, path, "cloud_target_ms");
    sc.Validate();
    sim.scenarios.push_back(std::move(sc));
  }
  for (const json& j : s.value("loads", json::array())) {
    sim::LoadSpec ld;
    ld.name = Get<std::string>(j, "simulation.loads", "name", "");
    const std::string path = "simulation.loads[" + ld.name + "]";
    ld.tier = sim::ParseTier(Get<std::string>(j, path, "tier", "edge"));
    ld.users = Get(j, path, "users", ld.users);
    ld.payload_kb = Get(j, path, "payload_kb", ld.payload_kb);
    ld.capacity = Get(j, path, "capacity", ld.capacity);
    ld.proc_ms = GetRange(j, path, "proc_ms", {});
    ld.include_network = Get(j, path, "include_network", ld.include_network);
    ld.requests_per_user = Get(j, path, "requests_per_user", ld.requests_per_user);
    ld.target_rps = GetOptional(j, path, "target_rps");
    ld.Validate();
    sim.loads.push_back(std::move(ld));
  }
  const json& r = Section(s, "raft");
  sim.raft.reference_nodes = Get(r, "simulation.raft", "reference_nodes", sim.raft.reference_nodes);
  sim.raft.scale_exponent = Get(r, "simulation.raft", "scale_exponent", sim.raft.scale_exponent);
  for (const json& p : r.value("phases", json::array())) {
    sim::RaftPhase phase;
    phase.name = Get<std::string>(p, "simulation.raft.phases", "name", "");
    phase.mean_ms = Get(p, "simulation.raft.phases", "mean_ms", 0.0);
    phase.relative_half_width =
        Get(p, "simulation.raft.phases", "relative_half_width", phase.relative_half_width);
    sim.raft.phases.push_back(std::move(phase));
  }
  const json batch = r.value("batch_size", json::object());
  for (const auto& [k, v] : batch.items()) {
    sim.raft.batch_size[std::stoi(k)] = v.get<double>();
  }
  const json targets = r.value("targets", json::object());
  for (const auto& [k, v] : targets.items()) {
    const auto pair = v.get<std::vector<double>>();
    Require(pair.size() == 2, ErrorCode::kConfigError,
            "simulation.raft.targets entries are [mean_ms, tps]");
    sim.raft_targets[std::stoi(k)] = {pair[0], pair[1]};
  }
  sim.nodes = Get(s, "simulation", "nodes", std::vector<int>{4, 7, 10, 13});
  if (!sim.raft.phases.empty()) sim.raft.Validate();
}

}  // namespace

std::string DefaultConfigPath() {
  return std::string(DPHEALTH_SOURCE_DIR) + "/config/default.json";
}

AppConfig ParseConfig(json doc, const Overrides& o) {
  Require(doc.is_object(), ErrorCode::kConfigError, "config root must be an object");
  if (o.seed) doc["seed"] = *o.seed;
  if (o.out_dir) doc["output_dir"] = *o.out_dir;
  if (o.dataset) doc["dataset"]["path"] = *o.dataset;
  if (o.synthetic) doc["dataset"]["synthetic"] = true;
  if (o.target_column) doc["attacks"]["target_column"] = *o.target_column;
  if (o.ledger_path) doc["ledger"]["path"] = *o.ledger_path;

  AppConfig cfg;
  cfg.resolved = doc;
  const std::string canonical = doc.dump();
  const auto digest = ledger::Sha256(canonical);
  cfg.sha256 = ledger::ToHex(digest);
  cfg.seed = Get<std::uint64_t>(doc, "", "seed", 42);
  cfg.out_dir = Get<std::string>(doc, "", "output_dir", "out");

  const json& d = Section(doc, "dataset");
  cfg.data.path = Get<std::string>(d, "dataset", "path", "");
  cfg.data.synthetic = Get(d, "dataset", "synthetic", false);
  cfg.data.csv.label_column = Get(d, "dataset", "label_column", cfg.data.csv.label_column);
  cfg.data.csv.excluded_columns =
      Get(d, "dataset", "excluded_columns", cfg.data.csv.excluded_columns);
  const json& g = Section(d, "generator");
  cfg.data.generator.rows = Get<Eigen::Index>(g, "dataset.generator", "rows", cfg.data.generator.rows);
  cfg.data.generator.positives =
      Get<Eigen::Index>(g, "dataset.generator", "positives", cfg.data.generator.positives);
  cfg.data.generator.seed = Get(g, "dataset.generator", "seed", cfg.data.generator.seed);

  const json& e = Section(doc, "experiment");
  BenchConfig& b = cfg.bench;
  b.epsilons = Get(e, "experiment", "epsilons", std::vector<double>{0.5, 1, 2, 3, 5, 10});
  b.alphas = Get(e, "experiment", "alphas", std::vector<double>{0.3, 0.5, 0.7});
  for (const auto& m : Get(e, "experiment", "mechanisms",
                           std::vector<std::string>{"laplace", "gaussian", "hybrid"})) {
    b.mechanisms.push_back(dp::ParseMechanism(m));
  }
  for (const auto& m : Get(e, "experiment", "models",
                           std::vector<std::string>{"random_forest", "kmeans", "logreg",
                                                    "naive_bayes"})) {
    b.models.push_back(ml::ParseModel(m));
  }
  b.runs = Get(e, "experiment", "runs", b.runs);
  b.delta = Get(e, "experiment", "delta", b.delta);
  b.sensitivity_percentile =
      Get(e, "experiment", "sensitivity_percentile", b.sensitivity_percentile);
  b.sensitivity = GetOptional(e, "experiment", "sensitivity");
  b.alpha = Get(e, "experiment", "alpha", b.alpha);
  b.metrics_epsilon = Get(e, "experiment", "metrics_epsilon", b.metrics_epsilon);
  b.alpha_sweep_epsilon = Get(e, "experiment", "alpha_sweep_epsilon", b.alpha_sweep_epsilon);
  const json& sp = Section(e, "split");
  b.split.test_fraction = Get(sp, "experiment.split", "test_fraction", b.split.test_fraction);
  b.split.stratified = Get(sp, "experiment.split", "stratified", b.split.stratified);
  b.split.balance_train = Get(sp, "experiment.split", "balance_train", b.split.balance_train);
  b.split.seed = cfg.seed;
  ParseHyper(Section(doc, "hyperparams"), b.hyper);
  Require(!b.epsilons.empty() && !b.alphas.empty() && !b.mechanisms.empty() &&
              !b.models.empty(),
          ErrorCode::kConfigError, "experiment grids must be non-empty");
  Require(b.runs >= 1, ErrorCode::kConfigError, "experiment.runs must be >= 1");
  for (double eps : b.epsilons) {
    Require(eps > 0.0, ErrorCode::kConfigError, "experiment.epsilons must be positive");
  }
  for (double a : b.alphas) {
    Require(a >= 0.0 && a <= 1.0, ErrorCode::kConfigError, "experiment.alphas must lie in [0, 1]");
  }
  Require(b.sensitivity_percentile > 0.0 && b.sensitivity_percentile <= 1.0,
          ErrorCode::kConfigError, "experiment.sensitivity_percentile must lie in (0, 1]");

  const json& a = Section(doc, "attacks");
  cfg.attack.epsilons = Get(a, "attacks", "epsilons", b.epsilons);
  cfg.attack.seeds = Get(a, "attacks", "seeds", cfg.attack.seeds);
  cfg.attack.mechanism = dp::ParseMechanism(Get<std::string>(a, "attacks", "mechanism", "hybrid"));
  cfg.attack.alpha = Get(a, "attacks", "alpha", cfg.attack.alpha);
  cfg.attack.target_column = Get(a, "attacks", "target_column", cfg.attack.target_column);
  Require(cfg.attack.seeds >= 1 && !cfg.attack.epsilons.empty(), ErrorCode::kConfigError,
          "attacks needs at least one seed and one epsilon");

  const json& l = Section(doc, "ledger");
  cfg.ledger.path = Get<std::string>(l, "ledger", "path", "");
  cfg.ledger.total_epsilon = Get(l, "ledger", "total_epsilon", cfg.ledger.total_epsilon);
  cfg.ledger.key_hex = Get<std::string>(l, "ledger", "key_hex", "");

  ParseSim(Section(doc, "simulation"), cfg.sim);
  cfg.sim.seed = cfg.seed;
  return cfg;
}

AppConfig LoadConfig(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  Require(static_cast<bool>(in), ErrorCode::kConfigError, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str(), nullptr, /*allow_exceptions=*/true,
                      /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kConfigError, path + ": " + e.what());
  }
  return ParseConfig(std::move(doc), overrides);
}

dp::MechanismSpec MakeMechanism(dp::MechanismKind kind, double epsilon, double delta,
                                double sensitivity, double alpha) {
  switch (kind) {
    case dp::MechanismKind::kLaplace:
      return dp::MechanismSpec::Laplace(epsilon, sensitivity);
    case dp::MechanismKind::kGaussian:
      return dp::MechanismSpec::Gaussian(epsilon, delta, sensitivity);
    case dp::MechanismKind::kHybridWeighted:
      return dp::MechanismSpec::HybridWeighted(epsilon, delta, sensitivity, alpha);
    case dp::MechanismKind::kHybridSplit:
      return dp::MechanismSpec::HybridSplit(epsilon, sensitivity, alpha);
  }
  Fail(ErrorCode::kInvalidParams, "unknown mechanism kind");
}

}  // namespace dphealth::cli
