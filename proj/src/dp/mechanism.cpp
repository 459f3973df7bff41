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

#include "dphealth/dp/mechanism.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dphealth::dp {

void PrivacyParams::Validate() const {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be finite and positive");
  Require(std::isfinite(delta) && delta >= 0.0 && delta < 1.0,
          ErrorCode::kInvalidParams, "delta must lie in [0, 1)");
  Require(std::isfinite(sensitivity) && sensitivity >= 0.0,
          ErrorCode::kInvalidParams, "sensitivity must be finite and >= 0");
}

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kLaplace: return "laplace";
    case MechanismKind::kGaussian: return "gaussian";
    case MechanismKind::kHybridWeighted: return "hybrid";
    case MechanismKind::kHybridSplit: return "hybrid_split";
  }
  return "unknown";
}

MechanismKind ParseMechanism(std::string_view name) {
  if (name == "laplace") return MechanismKind::kLaplace;
  if (name == "gaussian") return MechanismKind::kGaussian;
  if (name == "hybrid" || name == "hybrid_weighted") {
    return MechanismKind::kHybridWeighted;
  }
  if (name == "hybrid_split") return MechanismKind::kHybridSplit;
  Fail(ErrorCode::kInvalidParams, "unknown mechanism '" + std::string(name) + "'");
}

MechanismSpec MechanismSpec::Laplace(double epsilon, double sensitivity) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kLaplace;
  spec.params = {epsilon, 0.0, sensitivity};
  spec.Validate();
  return spec;
}

MechanismSpec MechanismSpec::Gaussian(double epsilon, double delta,
                                      double sensitivity) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kGaussian;
  spec.params = {epsilon, delta, sensitivity};
  spec.Validate();
  return spec;
}

MechanismSpec MechanismSpec::HybridWeighted(double epsilon, double delta,
                                            double sensitivity, double alpha) {
  MechanismSpec spec;
  spec.kind = MechanismKind::kHybridWeighted;
  spec.params = {epsilon, delta, sensitivity};
  spec.alpha = alpha;
  spec.Validate();
  return spec;
}

MechanismSpec MechanismSpec::HybridSplit(double epsilon, double sensitivity,
                                         double laplace_share) {
  Require(laplace_share > 0.0 && laplace_share < 1.0, ErrorCode::kInvalidParams,
          "laplace share must lie in (0, 1)");
  MechanismSpec spec;
  spec.kind = MechanismKind::kHybridSplit;
  spec.params = {epsilon, 0.0, sensitivity};
  spec.epsilon_laplace = laplace_share * epsilon;
  spec.epsilon_gaussian = epsilon - spec.epsilon_laplace;
  spec.Validate();
  return spec;
}

void MechanismSpec::Validate() const {
  params.Validate();
  switch (kind) {
    case MechanismKind::kLaplace:
      break;
    case MechanismKind::kGaussian:
      Require(params.delta > 0.0, ErrorCode::kInvalidParams,
              "Gaussian mechanism requires delta in (0, 1)");
      break;
    case MechanismKind::kHybridWeighted:
      Require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::kInvalidParams,
              "alpha must lie in [0, 1]");
      Require(alpha == 1.0 || params.delta > 0.0, ErrorCode::kInvalidParams,
              "hybrid mechanism with a Gaussian component requires delta > 0");
      break;
    case MechanismKind::kHybridSplit: {
      Require(std::isfinite(epsilon_laplace) && epsilon_laplace > 0.0 &&
                  std::isfinite(epsilon_gaussian) && epsilon_gaussian > 0.0,
              ErrorCode::kInvalidParams, "split budgets must be positive");
      const double sum = epsilon_laplace + epsilon_gaussian;
      const double ulp =
          std::nextafter(params.epsilon, std::numeric_limits<double>::infinity()) -
          params.epsilon;
      Require(std::abs(sum - params.epsilon) <= ulp, ErrorCode::kInvalidParams,
              "split budgets must sum to epsilon");
      break;
    }
  }
}

double MechanismSpec::EpsilonCharge() const {
  if (kind == MechanismKind::kHybridSplit) {
    return epsilon_laplace + epsilon_gaussian;
  }
  return params.epsilon;
}

double MechanismSpec::NoiseVariance() const {
  const double delta_f = params.sensitivity;
  switch (kind) {
    case MechanismKind::kLaplace: {
      const double b = LaplaceScale(delta_f, params.epsilon);
      return 2.0 * b * b;
    }
    case MechanismKind::kGaussian: {
      const double s = GaussianSigma(delta_f, params.epsilon, params.delta);
      return s * s;
    }
    case MechanismKind::kHybridWeighted: {
      const double b = LaplaceScale(delta_f, params.epsilon);
      const double s = alpha < 1.0
                           ? GaussianSigma(delta_f, params.epsilon, params.delta)
                           : 0.0;
      return alpha * alpha * 2.0 * b * b + (1.0 - alpha) * (1.0 - alpha) * s * s;
    }
    case MechanismKind::kHybridSplit: {
      const double b = delta_f / epsilon_laplace;
      const double s = delta_f / epsilon_gaussian;
      return 2.0 * b * b + s * s;
    }
  }
  return 0.0;
}

std::string MechanismSpec::Describe() const {
  std::ostringstream os;
  os << MechanismName(kind) << "(eps=" << params.epsilon
     << ", sens=" << params.sensitivity;
  if (kind == MechanismKind::kGaussian || kind == MechanismKind::kHybridWeighted) {
    os << ", delta=" << params.delta;
  }
  if (kind == MechanismKind::kHybridWeighted) os << ", alpha=" << alpha;
  if (kind == MechanismKind::kHybridSplit) {
    os << ", eps_l=" << epsilon_laplace << ", eps_g=" << epsilon_gaussian;
  }
  os << ")";
  return os.str();
}

double LaplaceScale(double sensitivity, double epsilon) {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  Require(std::isfinite(sensitivity) && sensitivity >= 0.0,
          ErrorCode::kInvalidParams, "sensitivity must be non-negative");
  return sensitivity / epsilon;
}

double GaussianSigma(double sensitivity, double epsilon, double delta) {
  Require(std::isfinite(epsilon) && epsilon > 0.0, ErrorCode::kInvalidParams,
          "epsilon must be positive");
  Require(delta > 0.0 && delta < 1.0, ErrorCode::kInvalidParams,
          "delta must lie in (0, 1)");
  Require(std::isfinite(sensitivity) && sensitivity >= 0.0,
          ErrorCode::kInvalidParams, "sensitivity must be non-negative");
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

Vector SampleNoise(const MechanismSpec& spec, std::size_t count, Rng& rng) {
  spec.Validate();
  Vector noise(static_cast<Eigen::Index>(count));
  const double delta_f = spec.params.sensitivity;
  const double eps = spec.params.epsilon;
  switch (spec.kind) {
    case MechanismKind::kLaplace: {
      const double b = LaplaceScale(delta_f, eps);
      for (auto& x : noise) x = rng.Laplace(b);
      break;
    }
    case MechanismKind::kGaussian: {
      const double s = GaussianSigma(delta_f, eps, spec.params.delta);
      for (auto& x : noise) x = s * rng.StandardNormal();
      break;
    }
    case MechanismKind::kHybridWeighted: {
      const double b = LaplaceScale(delta_f, eps);
      const double s =
          spec.alpha < 1.0 ? GaussianSigma(delta_f, eps, spec.params.delta) : 0.0;
      const double a = spec.alpha;
      for (auto& x : noise) {
        const double lap = rng.Laplace(b);
        const double gauss = s * rng.StandardNormal();
        x = a * lap + (1.0 - a) * gauss;
      }
      break;
    }
    case MechanismKind::kHybridSplit: {
      const double b = LaplaceScale(delta_f, spec.epsilon_laplace);
      const double s = delta_f / spec.epsilon_gaussian;
      for (auto& x : noise) {
        const double lap = rng.Laplace(b);
        x = lap + s * rng.StandardNormal();
      }
      break;
    }
  }
  return noise;
}

FeatureMatrix PerturbMatrix(const FeatureMatrix& matrix,
                            const MechanismSpec& spec, Rng& rng) {
  spec.Validate();
  Require(AllFinite(matrix), ErrorCode::kInvalidInput,
          "matrix contains non-finite values");
  const double bound = spec.params.sensitivity;
  if (bound == 0.0) return matrix;
  const double limit = bound * (1.0 + 1e-9);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    Require(matrix.row(i).norm() <= limit, ErrorCode::kInvalidInput,
            "row " + std::to_string(i) +
                " exceeds the mechanism sensitivity; clip before perturbing");
  }
  const Vector noise =
      SampleNoise(spec, static_cast<std::size_t>(matrix.size()), rng);
  // Noise is laid out in the matrix's storage (column-major) order.
  return matrix + Eigen::Map<const FeatureMatrix>(noise.data(), matrix.rows(),
                                                  matrix.cols());
}

}  // namespace dphealth::dp
