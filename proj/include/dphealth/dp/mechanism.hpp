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

#ifndef DPHEALTH_DP_MECHANISM_HPP_
#define DPHEALTH_DP_MECHANISM_HPP_

#include <cstddef>
#include <string>
#include <string_view>

#include "dphealth/common.hpp"
#include "dphealth/random.hpp"

namespace dphealth::dp {

// Default failure probability for the Gaussian component.
inline constexpr double kDefaultDelta = 1e-5;

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = kDefaultDelta;
  double sensitivity = 0.0;

  // Throws kInvalidParams when epsilon <= 0, delta outside [0, 1) or
  // sensitivity < 0 (or any field is non-finite).
  void Validate() const;
};

enum class MechanismKind {
  kLaplace,
  kGaussian,
  // alpha * Lap(sensitivity / epsilon) + (1 - alpha) * N(0, sigma^2).
  kHybridWeighted,
  // Lap(sensitivity / epsilon_laplace) + N(0, (sensitivity / epsilon_gaussian)^2)
  // with epsilon_laplace + epsilon_gaussian = epsilon.
  kHybridSplit,
};

std::string_view MechanismName(MechanismKind kind);
MechanismKind ParseMechanism(std::string_view name);

struct MechanismSpec {
  MechanismKind kind = MechanismKind::kLaplace;
  PrivacyParams params;
  double alpha = 0.5;
  double epsilon_laplace = 0.0;
  double epsilon_gaussian = 0.0;

  static MechanismSpec Laplace(double epsilon, double sensitivity);
  static MechanismSpec Gaussian(double epsilon, double delta, double sensitivity);
  static MechanismSpec HybridWeighted(double epsilon, double delta,
                                      double sensitivity, double alpha = 0.5);
  // Splits `epsilon` so that the Laplace component receives
  // `laplace_share * epsilon` and the Gaussian component the remainder.
  static MechanismSpec HybridSplit(double epsilon, double sensitivity,
                                   double laplace_share = 0.5);

  void Validate() const;

  // Budget consumed by one application under sequential composition.
  double EpsilonCharge() const;

  // Closed-form per-element noise variance.
  double NoiseVariance() const;

  std::string Describe() const;
};

// Laplace scale b = sensitivity / epsilon.
double LaplaceScale(double sensitivity, double epsilon);

// Classical Gaussian mechanism: sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon.
double GaussianSigma(double sensitivity, double epsilon, double delta);

// `count` i.i.d. noise values drawn per the mechanism.
Vector SampleNoise(const MechanismSpec& spec, std::size_t count, Rng& rng);

// Element-wise input perturbation. Rows must already be clipped to the
// mechanism sensitivity; a zero-sensitivity mechanism is the identity.
FeatureMatrix PerturbMatrix(const FeatureMatrix& matrix,
                            const MechanismSpec& spec, Rng& rng);

}  // namespace dphealth::dp

#endif  // DPHEALTH_DP_MECHANISM_HPP_
