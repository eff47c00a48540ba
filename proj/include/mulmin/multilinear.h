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

#ifndef MULMIN_MULTILINEAR_H_
#define MULMIN_MULTILINEAR_H_

// Multilinear evaluation of payoff tensors at mixed profiles:
//   A_i[p]        expected payoff of player i,
//   A_i[p | x^i]  player i deviates to x^i,
//   A_0[x, p]     = sum_i x_i A_i[p].
// All evaluations are direct sums over the n̂ pure profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mulmin/tensor.h"

namespace mulmin {

inline constexpr double kSimplexSumTolerance = 1e-12;

namespace internal {

// Validates a probability vector and renormalizes it once.
inline std::vector<double> CheckedSimplexVector(std::vector<double> v,
                                                const char* what) {
  if (v.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty vector");
  }
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument(std::string(what) +
                                  ": entries must be finite and >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexSumTolerance) {
    throw std::invalid_argument(std::string(what) + ": entries sum to " +
                                FormatReal(sum) + ", not 1");
  }
  for (double& x : v) x /= sum;
  return v;
}

}  // namespace internal

// One player's mixed strategy, an element of S_{n_i}.
class MixedStrategy {
 public:
  MixedStrategy() = default;
  explicit MixedStrategy(std::vector<double> probs)
      : probs_(internal::CheckedSimplexVector(std::move(probs),
                                              "MixedStrategy")) {}

  static MixedStrategy Pure(int size, int action) {
    if (action < 0 || action >= size) {
      throw std::out_of_range("MixedStrategy::Pure: action out of range");
    }
    std::vector<double> v(size, 0.0);
    v[action] = 1.0;
    return MixedStrategy(std::move(v));
  }

  static MixedStrategy Uniform(int size) {
    return MixedStrategy(std::vector<double>(size, 1.0 / size));
  }

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int j) const { return probs_[j]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const MixedStrategy&) const = default;

 private:
  std::vector<double> probs_;
};

// p = (p^1, ..., p^n).
class MixedProfile {
 public:
  MixedProfile() = default;
  explicit MixedProfile(std::vector<MixedStrategy> strategies)
      : strategies_(std::move(strategies)) {}

  static MixedProfile Uniform(const GameShape& shape) {
    std::vector<MixedStrategy> s;
    for (int c : shape.strategy_counts()) s.push_back(MixedStrategy::Uniform(c));
    return MixedProfile(std::move(s));
  }

  static MixedProfile Pure(const GameShape& shape, const PureProfile& profile) {
    if (!IsValidProfile(shape, profile)) {
      throw std::out_of_range("MixedProfile::Pure: invalid profile");
    }
    std::vector<MixedStrategy> s;
    for (int k = 0; k < shape.num_players(); ++k) {
      s.push_back(MixedStrategy::Pure(shape.num_strategies(k),
                                      profile.indices[k]));
    }
    return MixedProfile(std::move(s));
  }

  int num_players() const { return static_cast<int>(strategies_.size()); }
  const MixedStrategy& operator[](int i) const { return strategies_[i]; }
  const std::vector<MixedStrategy>& strategies() const { return strategies_; }

  MixedProfile WithStrategy(int player, MixedStrategy s) const {
    MixedProfile out = *this;
    out.strategies_.at(player) = std::move(s);
    return out;
  }

  bool Matches(const GameShape& shape) const {
    if (num_players() != shape.num_players()) return false;
    for (int k = 0; k < num_players(); ++k) {
      if (strategies_[k].size() != shape.num_strategies(k)) return false;
    }
    return true;
  }

  bool operator==(const MixedProfile&) const = default;

 private:
  std::vector<MixedStrategy> strategies_;
};

// x in S_n, one weight per player. Also used for scaling weights d.
class SelectorWeights {
 public:
  SelectorWeights() = default;
  explicit SelectorWeights(std::vector<double> weights)
      : weights_(internal::CheckedSimplexVector(std::move(weights),
                                                "SelectorWeights")) {}

  static SelectorWeights Uniform(int n) {
    return SelectorWeights(std::vector<double>(n, 1.0 / n));
  }
  static SelectorWeights Unit(int n, int i) {
    std::vector<double> w(n, 0.0);
    w.at(i) = 1.0;
    return SelectorWeights(std::move(w));
  }

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  double min() const {
    double m = weights_.empty() ? 0.0 : weights_[0];
    for (double w : weights_) m = std::min(m, w);
    return m;
  }
  // Membership in the open simplex S_n°.
  bool strictly_positive() const { return !weights_.empty() && min() > 0.0; }

  bool operator==(const SelectorWeights&) const = default;

 private:
  std::vector<double> weights_;
};

namespace internal {

inline void CheckShapes(const PayoffTensor& t, const MixedProfile& p) {
  if (!p.Matches(t.shape())) {
    throw std::invalid_argument("mixed profile does not match game shape");
  }
}

inline void CheckPlayerIndex(const PayoffTensor& t, int player) {
  if (player < 0 || player >= t.num_players()) {
    throw std::out_of_range("player index out of range");
  }
}

// Sum over profiles of a(player, I) times the product of p^k_{i_k} over all
// k != skip (skip = -1 multiplies every player), accumulated into
// out[i_skip] (or out[0] when skip = -1).
inline void Accumulate(const PayoffTensor& t, int player, const MixedProfile& p,
                       int skip, std::vector<double>& out) {
  auto a = t.player_payoffs(player);
  for (ProfileIterator it(t.shape()); !it.done(); it.Next()) {
    const auto& idx = it.profile().indices;
    double w = a[it.flat_index()];
    if (w == 0.0) continue;
    for (int k = 0; k < p.num_players() && w != 0.0; ++k) {
      if (k != skip) w *= p[k][idx[k]];
    }
    out[skip < 0 ? 0 : idx[skip]] += w;
  }
}

}  // namespace internal

// A_player[p].
inline double ExpectedPayoff(const PayoffTensor& t, int player,
                             const MixedProfile& p) {
  internal::CheckPlayerIndex(t, player);
  internal::CheckShapes(t, p);
  std::vector<double> acc(1, 0.0);
  internal::Accumulate(t, player, p, -1, acc);
  return acc[0];
}

// A_player[p | e_j] for every pure action j of the player.
inline std::vector<double> DeviationPayoffs(const PayoffTensor& t, int player,
                                            const MixedProfile& p) {
  internal::CheckPlayerIndex(t, player);
  internal::CheckShapes(t, p);
  std::vector<double> acc(t.shape().num_strategies(player), 0.0);
  internal::Accumulate(t, player, p, player, acc);
  return acc;
}

// A_player[p | x].
inline double UnilateralPayoff(const PayoffTensor& t, int player,
                               const MixedProfile& p, const MixedStrategy& x) {
  internal::CheckPlayerIndex(t, player);
  if (x.size() != t.shape().num_strategies(player)) {
    throw std::invalid_argument("deviation strategy has the wrong length");
  }
  auto dev = DeviationPayoffs(t, player, p);
  double v = 0.0;
  for (int j = 0; j < x.size(); ++j) v += x[j] * dev[j];
  return v;
}

struct BestResponse {
  double value = 0.0;
  int action = 0;  // 0-based; lowest index among ties
};

inline BestResponse ComputeBestResponse(const PayoffTensor& t, int player,
                                        const MixedProfile& p) {
  auto dev = DeviationPayoffs(t, player, p);
  BestResponse br{dev[0], 0};
  for (int j = 1; j < static_cast<int>(dev.size()); ++j) {
    if (dev[j] > br.value) br = {dev[j], j};
  }
  return br;
}

// A_0[x, p] = sum_i x_i A_i[p].
inline double SelectorValue(const PayoffTensor& t, const SelectorWeights& x,
                            const MixedProfile& p) {
  if (x.size() != t.num_players()) {
    throw std::invalid_argument("selector weights have the wrong length");
  }
  internal::CheckShapes(t, p);
  double v = 0.0;
  for (int i = 0; i < t.num_players(); ++i) {
    if (x[i] != 0.0) v += x[i] * ExpectedPayoff(t, i, p);
  }
  return v;
}

inline std::vector<double> ExpectedPayoffs(const PayoffTensor& t,
                                           const MixedProfile& p) {
  std::vector<double> out(t.num_players());
  for (int i = 0; i < t.num_players(); ++i) out[i] = ExpectedPayoff(t, i, p);
  return out;
}

}  // namespace mulmin

#endif  // MULMIN_MULTILINEAR_H_
