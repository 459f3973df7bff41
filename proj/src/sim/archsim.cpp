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

#include "dphealth/sim/archsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <tuple>

namespace dphealth::sim {
namespace {

void RequireTrials(int trials) {
  Require(trials >= 1, ErrorCode::kInvalidParams, "trials must be at least 1");
}

double ProcessingDraw(const ScenarioSpec& s, Tier tier, Rng& rng) {
  return (tier == Tier::kEdge ? s.edge_proc_ms : s.cloud_proc_ms).Draw(rng);
}

// Network delay for one request. Draw order is fixed: IoT hop, then WAN.
double NetworkDraw(Tier tier, const TierConfig& tiers, Rng& rng) {
  if (tier == Tier::kEdge) return tiers.iot_edge_ms.Draw(rng);
  double d = 0.0;
  if (tiers.cloud_includes_iot_hop) d += tiers.iot_edge_ms.Draw(rng);
  return d + tiers.edge_cloud_ms.Draw(rng);
}

}  // namespace

void Range::Validate(std::string_view what) const {
  Require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi,
          ErrorCode::kInvalidParams,
          std::string(what) + ": range must satisfy 0 <= lo <= hi");
}

std::string_view TierName(Tier tier) { return tier == Tier::kEdge ? "edge" : "cloud"; }

Tier ParseTier(std::string_view name) {
  if (name == "edge") return Tier::kEdge;
  if (name == "cloud") return Tier::kCloud;
  Fail(ErrorCode::kInvalidParams, "unknown tier: " + std::string(name));
}

void TierConfig::Validate() const {
  iot_edge_ms.Validate("iot_edge_ms");
  edge_cloud_ms.Validate("edge_cloud_ms");
  Require(edge_bandwidth > 0.0 && cloud_path_bandwidth > 0.0 &&
              std::isfinite(edge_bandwidth) && std::isfinite(cloud_path_bandwidth),
          ErrorCode::kInvalidParams, "bandwidths must be positive");
}

void ScenarioSpec::Validate() const {
  Require(payload_kb >= 0.0 && std::isfinite(payload_kb), ErrorCode::kInvalidParams,
          name + ": payload must be non-negative");
  edge_proc_ms.Validate(name + " edge_proc_ms");
  cloud_proc_ms.Validate(name + " cloud_proc_ms");
}

LatencyReport Summarize(std::vector<double> samples) {
  Require(!samples.empty(), ErrorCode::kInvalidInput, "no samples to summarize");
  LatencyReport r;
  r.trials = static_cast<int>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  r.mean = sum / static_cast<double>(samples.size());
  double ss = 0.0;
  for (double v : samples) ss += (v - r.mean) * (v - r.mean);
  r.std = samples.size() > 1 ? std::sqrt(ss / static_cast<double>(samples.size() - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  r.min = *lo;
  r.max = *hi;
  // A constant sample can round its mean off the value itself.
  r.mean = std::clamp(r.mean, r.min, r.max);
  r.samples = std::move(samples);
  return r;
}

double MeanNetworkMs(Tier tier, const TierConfig& tiers) {
  if (tier == Tier::kEdge) return tiers.iot_edge_ms.mid();
  return (tiers.cloud_includes_iot_hop ? tiers.iot_edge_ms.mid() : 0.0) +
         tiers.edge_cloud_ms.mid();
}

double TransferMs(Tier tier, double payload_kb, const TierConfig& tiers) {
  return payload_kb /
         (tier == Tier::kEdge ? tiers.edge_bandwidth : tiers.cloud_path_bandwidth);
}

LatencyReport SimulateScenario(const ScenarioSpec& scenario, Tier tier,
                               const TierConfig& tiers, int trials,
                               std::uint64_t seed) {
  RequireTrials(trials);
  tiers.Validate();
  scenario.Validate();
  const double transfer = TransferMs(tier, scenario.payload_kb, tiers);
  std::vector<double> samples(static_cast<std::size_t>(trials));
  double network_sum = 0.0;
  double proc_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
    const double network = NetworkDraw(tier, tiers, rng);
    const double proc = ProcessingDraw(scenario, tier, rng);
    network_sum += network;
    proc_sum += proc;
    samples[static_cast<std::size_t>(t)] = network + transfer + proc;
  }
  LatencyReport r = Summarize(std::move(samples));
  const double total = network_sum + proc_sum + transfer * trials;
  if (total > 0.0) {
    r.breakdown = {{"network", network_sum / total},
                   {"transfer", transfer * trials / total},
                   {"processing", proc_sum / total}};
  }
  return r;
}

double Speedup(const LatencyReport& edge, const LatencyReport& cloud) {
  Require(edge.mean > 0.0, ErrorCode::kInvalidInput, "edge mean latency is zero");
  return cloud.mean / edge.mean;
}

Range CalibrateProcessing(double target_ms, Tier tier, double payload_kb,
                          const TierConfig& tiers, double relative_half_width) {
  Require(relative_half_width >= 0.0 && relative_half_width <= 1.0,
          ErrorCode::kInvalidParams, "half width must lie in [0, 1]");
  const double mid =
      target_ms - MeanNetworkMs(tier, tiers) - TransferMs(tier, payload_kb, tiers);
  Require(mid > 0.0, ErrorCode::kInvalidParams,
          "target latency is below the network and transfer floor");
  return {mid * (1.0 - relative_half_width), mid * (1.0 + relative_half_width)};
}

void LoadSpec::Validate() const {
  Require(users >= 1, ErrorCode::kInvalidParams, name + ": users must be >= 1");
  Require(capacity >= 1, ErrorCode::kInvalidParams, name + ": capacity must be >= 1");
  Require(requests_per_user >= 1, ErrorCode::kInvalidParams,
          name + ": requests_per_user must be >= 1");
  Require(payload_kb >= 0.0 && std::isfinite(payload_kb), ErrorCode::kInvalidParams,
          name + ": payload must be non-negative");
  proc_ms.Validate(name + " proc_ms");
}

ThroughputReport SimulateThroughput(const LoadSpec& load, const TierConfig& tiers,
                                    int trials, std::uint64_t seed) {
  RequireTrials(trials);
  tiers.Validate();
  load.Validate();
  const double transfer = TransferMs(load.tier, load.payload_kb, tiers);

  ThroughputReport out;
  std::vector<double> responses;
  double service_sum = 0.0;
  std::int64_t service_count = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
    // (completion time, sequence, user, issue time); sequence breaks ties.
    using Event = std::tuple<double, std::int64_t, int, double>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> running;
    std::deque<std::pair<int, double>> waiting;
    std::vector<int> remaining(static_cast<std::size_t>(load.users),
                               load.requests_per_user);
    std::int64_t seq = 0;
    int free_slots = load.capacity;
    auto start = [&](int user, double issued, double now) {
      double service = transfer + load.proc_ms.Draw(rng);
      if (load.include_network) service += NetworkDraw(load.tier, tiers, rng);
      service_sum += service;
      ++service_count;
      --free_slots;
      running.emplace(now + service, seq++, user, issued);
    };
    auto issue = [&](int user, double now) {
      --remaining[static_cast<std::size_t>(user)];
      if (free_slots > 0 && waiting.empty()) {
        start(user, now, now);
      } else {
        waiting.emplace_back(user, now);
      }
    };
    for (int u = 0; u < load.users; ++u) issue(u, 0.0);
    double now = 0.0;
    std::int64_t completed = 0;
    while (!running.empty()) {
      const auto [done, s, user, issued] = running.top();
      running.pop();
      now = done;
      ++completed;
      ++free_slots;
      responses.push_back(done - issued);
      if (remaining[static_cast<std::size_t>(user)] > 0) issue(user, now);
      while (free_slots > 0 && !waiting.empty()) {
        const auto [next_user, next_issued] = waiting.front();
        waiting.pop_front();
        start(next_user, next_issued, now);
      }
    }
    out.trial_throughput.push_back(now > 0.0 ? static_cast<double>(completed) * 1000.0 / now
                                             : 0.0);
  }
  out.response = Summarize(std::move(responses));
  out.mean_service_ms = service_sum / static_cast<double>(service_count);
  double sum = 0.0;
  for (double v : out.trial_throughput) sum += v;
  out.throughput_rps = sum / static_cast<double>(trials);
  out.response.throughput_rps = out.throughput_rps;
  return out;
}

void RaftModel::Validate() const {
  Require(!phases.empty(), ErrorCode::kInvalidParams, "raft model needs phases");
  for (const auto& p : phases) {
    Require(p.mean_ms > 0.0 && std::isfinite(p.mean_ms), ErrorCode::kInvalidParams,
            p.name + ": phase mean must be positive");
    Require(p.relative_half_width >= 0.0 && p.relative_half_width <= 1.0,
            ErrorCode::kInvalidParams, p.name + ": half width must lie in [0, 1]");
  }
  Require(reference_nodes >= 3, ErrorCode::kInvalidParams,
          "reference node count must be >= 3");
  Require(!batch_size.empty(), ErrorCode::kInvalidParams, "batch sizes missing");
  for (const auto& [n, b] : batch_size) {
    Require(n >= 3 && b > 0.0, ErrorCode::kInvalidParams, "invalid batch size entry");
  }
}

double RaftModel::BatchSize(int nodes) const {
  Require(!batch_size.empty(), ErrorCode::kInvalidParams, "batch sizes missing");
  const auto hi = batch_size.lower_bound(nodes);
  if (hi == batch_size.end()) return std::prev(hi)->second;
  if (hi->first == nodes || hi == batch_size.begin()) return hi->second;
  const auto lo = std::prev(hi);
  const double f = static_cast<double>(nodes - lo->first) /
                   static_cast<double>(hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double RaftModel::Scale(int nodes) const {
  return std::pow(static_cast<double>(nodes - 1) / static_cast<double>(reference_nodes - 1),
                  scale_exponent);
}

LatencyReport SimulateRaft(const ConsensusConfig& config, int trials,
                           std::uint64_t seed) {
  RequireTrials(trials);
  Require(config.nodes >= 3, ErrorCode::kInvalidParams, "raft needs at least 3 nodes");
  config.model.Validate();
  const double scale = config.model.Scale(config.nodes);
  const auto& phases = config.model.phases;
  std::vector<double> phase_sums(phases.size(), 0.0);
  std::vector<double> samples(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(t)));
    double total = 0.0;
    for (std::size_t p = 0; p < phases.size(); ++p) {
      const double m = phases[p].mean_ms * scale;
      const double w = phases[p].relative_half_width;
      const double d = Range{m * (1.0 - w), m * (1.0 + w)}.Draw(rng);
      phase_sums[p] += d;
      total += d;
    }
    samples[static_cast<std::size_t>(t)] = total;
  }
  LatencyReport r = Summarize(std::move(samples));
  double all = 0.0;
  for (double s : phase_sums) all += s;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    r.breakdown.emplace_back(phases[p].name, phase_sums[p] / all);
  }
  r.throughput_rps = config.model.BatchSize(config.nodes) * 1000.0 / r.mean;
  return r;
}

}  // namespace dphealth::sim
