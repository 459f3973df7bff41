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

#ifndef DPHEALTH_ML_EXPERIMENT_HPP_
#define DPHEALTH_ML_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "dphealth/attacks/metrics.hpp"
#include "dphealth/dp/mechanism.hpp"
#include "dphealth/ml/dataset.hpp"
#include "dphealth/ml/model.hpp"

namespace dphealth::ml {

struct ExperimentResult {
  attacks::MetricsReport mean;
  std::vector<attacks::MetricsReport> runs;
  std::vector<std::uint64_t> run_seeds;
};

// Per-run seed r is DeriveSeed(seed, r). Within a run, the noise stream is
// DeriveSeed(run_seed, 1) and the learner stream DeriveSeed(run_seed, 2), so
// a mechanism change never shifts the learner's randomness.
std::uint64_t RunSeed(std::uint64_t seed, int run);

// Input perturbation: each run clips the training features to the
// mechanism's sensitivity, perturbs them, trains the non-private learner and
// scores it on the untouched test set. No mechanism gives the baseline.
ExperimentResult RunInputPerturbationExperiment(
    const TrainTestSplit& split, ModelKind kind,
    const std::optional<dp::MechanismSpec>& mechanism, int runs,
    std::uint64_t seed, const Hyperparams& hyper);

}  // namespace dphealth::ml

#endif  // DPHEALTH_ML_EXPERIMENT_HPP_
