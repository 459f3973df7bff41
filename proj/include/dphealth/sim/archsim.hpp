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

#ifndef DPHEALTH_SIM_ARCHSIM_HPP_
#define DPHEALTH_SIM_ARCHSIM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::sim {

// Closed interval in milliseconds; lo == hi is a point mass.
struct Range {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double Draw(Rng& rng) const { return lo == hi ? lo : rng.Uniform(lo, hi); }
  void Validate(std::string_view what) const;
};

enum class Tier { kEdge, kCloud };

std::string_view TierName(Tier tier);
Tier ParseTier(std::string_view name);

struct TierConfig {
  Range iot_edge_ms{2.0, 8.0};
  Range edge_cloud_ms{40.0, 80.0};
  // MB/s with 1 MB = 1000 KB, so transfer time in ms is payload_kb / rate.
  double edge_bandwidth = 100.0;
  double cloud_path_bandwidth = 50.0;
  // Whether the cloud path also pays the IoT-to-edge hop.
  bool cloud_includes_iot_hop = true;

  void Validate() const;
};

struct ScenarioSpec {
  std::string name;
  double payload_kb = 1.0;
  Range edge_proc_ms;
  Range cloud_proc_ms;
  // Reference means the processing ranges were fitted to, when known.
  std::optional<double> edge_target_ms;
  std::optional<double> cloud_target_ms;

  void Validate() const;
};

struct LatencyReport {
  double mean = 0.0;
  // Sample standard deviation (n - 1); zero for a single trial.
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  int trials = 0;
  std::optional<double> throughput_rps;
  // Component name -> share of the mean latency.
  std::vector<std::pair<std::string, double>> breakdown;
  // Per-trial values in trial order.
  std::vector<double> samples;
};

// Mean, std, min and max of `samples`, reduced in index order.
LatencyReport Summarize(std::vector<double> samples);

// Expected network delay and transfer time for one request on a tier.
double MeanNetworkMs(Tier tier, const TierConfig& tiers);
double TransferMs(Tier tier, double payload_kb, const TierConfig& tiers);

// Trial t draws from Rng(DeriveSeed(seed, t)). Latency is network draw(s)
// plus transfer plus a processing draw; the edge path skips the WAN hop.
LatencyReport SimulateScenario(const ScenarioSpec& scenario, Tier tier,
                               const TierConfig& tiers, int trials,
                               std::uint64_t seed);

// cloud.mean / edge.mean at full precision.
double Speedup(const LatencyReport& edge, const LatencyReport& cloud);

// Processing range whose midpoint makes the expected latency equal
// `target_ms`, with half-width `relative_half_width` times the midpoint.
Range CalibrateProcessing(double target_ms, Tier tier, double payload_kb,
                          const TierConfig& tiers, double relative_half_width);

struct LoadSpec {
  std::string name;
  Tier tier = Tier::kEdge;
  int users = 1;
  double payload_kb = 1.0;
  // Requests that may be in service at once; the rest wait FIFO.
  int capacity = 1;
  Range proc_ms;
  // When false the service time covers transfer and processing only.
  bool include_network = true;
  int requests_per_user = 200;
  std::optional<double> target_rps;

  void Validate() const;
};

struct ThroughputReport {
  // Response time including queueing, pooled over trials.
  LatencyReport response;
  // Service time alone.
  double mean_service_ms = 0.0;
  // Mean over trials of completions / makespan.
  double throughput_rps = 0.0;
  std::vector<double> trial_throughput;
};

// Closed loop: each user issues its next request the moment the previous one
// completes. A request holds a server slot for its whole service time.
ThroughputReport SimulateThroughput(const LoadSpec& load, const TierConfig& tiers,
                                    int trials, std::uint64_t seed);

struct RaftPhase {
  std::string name;
  // Mean duration at `RaftModel::reference_nodes`.
  double mean_ms = 0.0;
  // Uniform on mean * [1 - w, 1 + w].
  double relative_half_width = 0.5;
};

struct RaftModel {
  std::vector<RaftPhase> phases;
  int reference_nodes = 4;
  // Phase means scale by ((n - 1) / (reference - 1)) ^ exponent.
  double scale_exponent = 0.5;
  // Effective transactions per round by node count; linear in between,
  // clamped outside.
  std::map<int, double> batch_size;

  void Validate() const;
  double BatchSize(int nodes) const;
  double Scale(int nodes) const;
};

struct ConsensusConfig {
  int nodes = 4;
  RaftModel model;
};

// Finality latency per trial is the sum of the phase draws. The report's
// throughput is batch_size * 1000 / mean and its breakdown holds each
// phase's share of the summed phase means.
LatencyReport SimulateRaft(const ConsensusConfig& config, int trials,
                           std::uint64_t seed);

}  // namespace dphealth::sim

#endif  // DPHEALTH_SIM_ARCHSIM_HPP_
