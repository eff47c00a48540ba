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

#ifndef MULMIN_TESTS_TEST_UTIL_H_
#define MULMIN_TESTS_TEST_UTIL_H_

// Test-only helpers. The evaluators here deliberately take a different route
// from the library (recursive contraction of the tensor one player at a
// time, starting from the last) so they can serve as oracles.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mulmin/multilinear.h"
#include "mulmin/random.h"
#include "mulmin/tensor.h"

namespace mulmin::testing {

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline PayoffTensor Fixture(const std::string& name) {
  return LoadGame(ReadFile(std::string(MULMIN_FIXTURE_DIR) + "/" + name));
}

// Contracts player `player`'s subtensor against strategies[k] for every k,
// last player first. strategies may hold arbitrary real vectors.
inline double ContractOracle(const PayoffTensor& t, int player,
                             const std::vector<std::vector<double>>& vecs) {
  std::vector<double> cur(t.player_payoffs(player).begin(),
                          t.player_payoffs(player).end());
  for (int k = t.num_players() - 1; k >= 0; --k) {
    const int nk = t.shape().num_strategies(k);
    std::vector<double> next(cur.size() / nk, 0.0);
    for (std::size_t outer = 0; outer < next.size(); ++outer) {
      for (int j = 0; j < nk; ++j) next[outer] += cur[outer * nk + j] * vecs[k][j];
    }
    cur = std::move(next);
  }
  return cur[0];
}

inline std::vector<std::vector<double>> Vectors(const MixedProfile& p) {
  std::vector<std::vector<double>> out;
  for (const auto& s : p.strategies()) out.push_back(s.probs());
  return out;
}

inline double ExpectedOracle(const PayoffTensor& t, int player,
                             const MixedProfile& p) {
  return ContractOracle(t, player, Vectors(p));
}

inline double DeviationOracle(const PayoffTensor& t, int player,
                              const MixedProfile& p, int action) {
  auto v = Vectors(p);
  v[player].assign(v[player].size(), 0.0);
  v[player][action] = 1.0;
  return ContractOracle(t, player, v);
}

inline MixedProfile RandomProfile(Rng& rng, const GameShape& shape) {
  std::vector<MixedStrategy> s;
  for (int c : shape.strategy_counts()) s.emplace_back(UniformSimplexPoint(rng, c));
  return MixedProfile(std::move(s));
}

inline GameShape RandomShape(Rng& rng, int max_players, int max_strategies) {
  const int n = 1 + static_cast<int>(rng() % max_players);
  std::vector<int> counts(n);
  for (int& c : counts) c = 1 + static_cast<int>(rng() % max_strategies);
  return GameShape(counts);
}

}  // namespace mulmin::testing

#endif  // MULMIN_TESTS_TEST_UTIL_H_
