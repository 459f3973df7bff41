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

#ifndef DPHEALTH_RANDOM_HPP_
#define DPHEALTH_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace dphealth {

// SplitMix64 finalizer. Used to derive independent child seeds so that
// per-run and per-trial streams depend only on (root seed, index).
constexpr std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t index) {
  return MixSeed(MixSeed(root) ^ MixSeed(index + 0x632BE59BD9B4E019ULL));
}

// Seeded random source with platform-independent output.
//
// All continuous variates are built from the raw 64-bit mt19937_64 stream
// with explicit transforms (53-bit uniforms, inverse-CDF Laplace, Box-Muller
// Gaussian) so draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0, 1).
  double UniformOpen() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  double StandardNormal();
  double Normal(double mean, double stddev) {
    return mean + stddev * StandardNormal();
  }

  // Laplace(0, scale) by inverting the CDF of a uniform on (-1/2, 1/2).
  double Laplace(double scale);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Child generator whose stream depends only on this seed and `index`.
  Rng Fork(std::uint64_t index) const { return Rng(DeriveSeed(seed_, index)); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dphealth

#endif  // DPHEALTH_RANDOM_HPP_
