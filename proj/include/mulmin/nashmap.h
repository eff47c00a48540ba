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

#ifndef MULMIN_NASHMAP_H_
#define MULMIN_NASHMAP_H_

// The gain map f on mixed profiles:
//   G^i_j(p) = max(0, A_i[p|e_j] - A_i[p])
//   f(p)^i_j = (p^i_j + G^i_j(p)) / (1 + sum_k G^i_k(p))
// Fixed points of f are exactly the equilibria. Iterating f is a diagnostic;
// it is not guaranteed to converge and may cycle.

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mulmin/multilinear.h"
#include "mulmin/tensor.h"

namespace mulmin {

struct NashMapState {
  MixedProfile profile;
  std::vector<std::vector<double>> gains;  // gains[i][j] = G^i_j
  std::vector<double> gain_sums;           // c_i
  double residual = 0.0;                   // max_{i,j} G^i_j
};

inline std::vector<std::vector<double>> Gains(const PayoffTensor& t,
                                              const MixedProfile& p) {
  std::vector<std::vector<double>> g(t.num_players());
  for (int i = 0; i < t.num_players(); ++i) {
    auto dev = DeviationPayoffs(t, i, p);
    double expected = 0.0;
    for (int j = 0; j < p[i].size(); ++j) expected += p[i][j] * dev[j];
    g[i].resize(dev.size());
    for (std::size_t j = 0; j < dev.size(); ++j) {
      g[i][j] = std::max(0.0, dev[j] - expected);
    }
  }
  return g;
}

inline NashMapState EvaluateState(const PayoffTensor& t, MixedProfile p) {
  NashMapState s;
  s.gains = Gains(t, p);
  s.profile = std::move(p);
  for (const auto& row : s.gains) {
    double c = 0.0;
    for (double g : row) {
      c += g;
      s.residual = std::max(s.residual, g);
    }
    s.gain_sums.push_back(c);
  }
  return s;
}

// max_{i,j} G^i_j(p).
inline double NashResidual(const PayoffTensor& t, const MixedProfile& p) {
  return EvaluateState(t, p).residual;
}

namespace internal {

inline MixedProfile ApplyGains(const MixedProfile& p,
                               const std::vector<std::vector<double>>& gains) {
  std::vector<MixedStrategy> next;
  for (int i = 0; i < p.num_players(); ++i) {
    std::vector<double> g(p[i].size());
    double denom = 0.0;
    for (int j = 0; j < p[i].size(); ++j) {
      g[j] = p[i][j] + gains[i][j];
      denom += g[j];
    }
    for (double& v : g) v /= denom;
    next.emplace_back(std::move(g));
  }
  return MixedProfile(std::move(next));
}

}  // namespace internal

inline MixedProfile NashMapStep(const PayoffTensor& t, const MixedProfile& p) {
  return internal::ApplyGains(p, Gains(t, p));
}

struct NashMapTrace {
  NashMapState final_state;
  int iterations = 0;  // map applications performed
  bool converged = false;
  // Entry k describes the profile after k applications of f.
  std::vector<double> residuals;
  std::vector<std::vector<double>> gain_sums;
};

inline NashMapTrace IterateNashMap(const PayoffTensor& t, MixedProfile p0,
                                   int max_iters, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("IterateNashMap: tol must be positive");
  }
  if (max_iters < 0) {
    throw std::invalid_argument("IterateNashMap: max_iters must be >= 0");
  }
  NashMapTrace trace;
  NashMapState state = EvaluateState(t, std::move(p0));
  for (;;) {
    trace.residuals.push_back(state.residual);
    trace.gain_sums.push_back(state.gain_sums);
    if (state.residual <= tol) {
      trace.converged = true;
      break;
    }
    if (trace.iterations >= max_iters) break;
    MixedProfile next = internal::ApplyGains(state.profile, state.gains);
    state = EvaluateState(t, std::move(next));
    ++trace.iterations;
  }
  trace.final_state = std::move(state);
  return trace;
}

// Columns: iteration, residual, c_1..c_n.
inline void WriteNashMapCsv(const NashMapTrace& trace, std::ostream& out) {
  const std::size_t n =
      trace.gain_sums.empty() ? 0 : trace.gain_sums.front().size();
  out << "iteration,residual";
  for (std::size_t i = 0; i < n; ++i) out << ",c" << (i + 1);
  out << '\n';
  for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
    out << k << ',' << FormatReal17(trace.residuals[k]);
    for (double c : trace.gain_sums[k]) out << ',' << FormatReal17(c);
    out << '\n';
  }
}

}  // namespace mulmin

#endif  // MULMIN_NASHMAP_H_
