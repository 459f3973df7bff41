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

#include "dphealth/ml/experiment.hpp"

#include "dphealth/dp/sensitivity.hpp"
#include "dphealth/random.hpp"

namespace dphealth::ml {

std::uint64_t RunSeed(std::uint64_t seed, int run) {
  return DeriveSeed(seed, static_cast<std::uint64_t>(run));
}

ExperimentResult RunInputPerturbationExperiment(
    const TrainTestSplit& split, ModelKind kind,
    const std::optional<dp::MechanismSpec>& mechanism, int runs,
    std::uint64_t seed, const Hyperparams& hyper) {
  Require(runs >= 1, ErrorCode::kInvalidParams, "runs must be at least 1");
  split.train.Validate();
  split.test.Validate();
  if (mechanism) mechanism->Validate();

  ExperimentResult result;
  for (int r = 0; r < runs; ++r) {
    const std::uint64_t run_seed = RunSeed(seed, r);
    Rng noise_rng(DeriveSeed(run_seed, 1));
    Rng model_rng(DeriveSeed(run_seed, 2));
    FeatureMatrix train_x = split.train.features;
    if (mechanism && mechanism->params.sensitivity > 0.0) {
      train_x = dp::PerturbMatrix(
          dp::ClipRows(train_x, mechanism->params.sensitivity), *mechanism, noise_rng);
    }
    const TrainedModel model =
        Train(kind, train_x, split.train.labels, hyper, model_rng);
    result.runs.push_back(attacks::Evaluate(Predict(model, split.test.features),
                                            Scores(model, split.test.features),
                                            split.test.labels));
    result.run_seeds.push_back(run_seed);
  }
  result.mean = attacks::Average(result.runs);
  return result;
}

}  // namespace dphealth::ml
