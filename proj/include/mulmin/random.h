// Copyright 2026 The mulmin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULMIN_RANDOM_H_
#define MULMIN_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mulmin {

// The engine's output sequence is fixed by the C++ standard, so seeded runs
// reproduce across platforms. std::uniform_real_distribution is not, which is
// why the conversions below are spelled out.
using Rng = std::mt19937_64;

// u = (bits >> 11) * 2^-53 in [0, 1), then lo + (hi - lo) * u.
inline double UniformReal(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

// Uniform on (0, 1]; safe to take the log of.
inline double UniformOpenClosed(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Flat Dirichlet (uniform on the simplex) via normalized exponentials.
inline std::vector<double> UniformSimplexPoint(Rng& rng, int dim) {
  std::vector<double> w(dim);
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(UniformOpenClosed(rng));
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

// SplitMix64 finalizer, used to derive independent per-item seeds from a run
// seed: DeriveSeed(seed, k) seeds item k.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mulmin

#endif  // MULMIN_RANDOM_H_
