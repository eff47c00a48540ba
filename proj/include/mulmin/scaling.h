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

#ifndef MULMIN_SCALING_H_
#define MULMIN_SCALING_H_

// Diagonal scaling A_i(d) = d_i A_i for d in the open simplex, and the
// reweighting d'_i = d_i x*_i(d) / sigma, sigma = sum_i d_i x*_i(d). Each step
// gives the alternate bound
//   sum_i d'_i A_i[p_eq] <= sum_i d'_i A_i[p*(d)]
// for any equilibrium p_eq of the unscaled game.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mulmin/minimax.h"
#include "mulmin/multilinear.h"
#include "mulmin/random.h"
#include "mulmin/tensor.h"

namespace mulmin {

inline PayoffTensor Scale(const PayoffTensor& t, const SelectorWeights& d) {
  if (d.size() != t.num_players()) {
    throw std::invalid_argument("Scale: d has the wrong length");
  }
  if (!d.strictly_positive()) {
    throw std::invalid_argument("Scale: d must be strictly positive");
  }
  std::vector<double> scaled(t.payoffs().begin(), t.payoffs().end());
  const std::size_t total = t.shape().total_profiles();
  for (int i = 0; i < t.num_players(); ++i) {
    for (std::size_t f = 0; f < total; ++f) scaled[i * total + f] *= d[i];
  }
  return PayoffTensor(t.shape(), std::move(scaled));
}

struct ScalingStep {
  SelectorWeights d;
  MinimaxSolution solution;  // of the scaled game: x*(d), p*(d)
  double sigma = 0.0;        // sum_i d_i x*_i(d)
  // d'; absent when sigma fell to the positivity threshold.
  std::optional<SelectorWeights> d_next;
  // sum_i d'_i A_i[p*(d)] on the unscaled game.
  double bound_rhs = 0.0;
  // Quality of p*(d) as an approximate equilibrium of the unscaled game.
  QualityReport quality;
};

enum class ScalingStop { kConverged, kBoundaryHit, kMaxIters };

inline const char* ScalingStopName(ScalingStop s) {
  switch (s) {
    case ScalingStop::kConverged:
      return "converged";
    case ScalingStop::kBoundaryHit:
      return "boundary_hit";
    case ScalingStop::kMaxIters:
      return "max_iters";
  }
  return "unknown";
}

struct ScalingTrace {
  std::vector<ScalingStep> steps;
  ScalingStop stop_reason = ScalingStop::kMaxIters;
};

// Carries the steps completed before the failing solve.
class ScalingFailure : public SolverError {
 public:
  ScalingFailure(const SolverError& cause, ScalingTrace partial)
      : SolverError(cause.status(),
                    std::string("scaling step ") +
                        std::to_string(partial.steps.size()) + ": " +
                        cause.what()),
        partial_(std::move(partial)) {}

  const ScalingTrace& partial() const { return partial_; }

 private:
  ScalingTrace partial_;
};

struct ScalingOptions {
  int max_iters = 100;
  double conv_tol = 1e-9;
  double pos_tol = 1e-9;
  MinimaxOptions minimax;
};

inline ScalingStep ComputeScalingStep(const PayoffTensor& t,
                                      const SelectorWeights& d,
                                      const ScalingOptions& options = {}) {
  ScalingStep step;
  step.d = d;
  step.solution = SolveMinimax(Scale(t, d), options.minimax);
  const int n = t.num_players();
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    w[i] = d[i] * step.solution.x_star[i];
    step.sigma += w[i];
  }
  const auto payoffs = ExpectedPayoffs(t, step.solution.p_star);
  if (step.sigma > options.pos_tol) {
    for (double& v : w) v /= step.sigma;
    step.d_next = SelectorWeights(std::move(w));
    for (int i = 0; i < n; ++i) step.bound_rhs += (*step.d_next)[i] * payoffs[i];
  }
  step.quality = Quality(t, step.solution.p_star);
  return step;
}

// sum_i d'_i A_i[p] for a reference profile, the left side of the step's
// alternate bound.
inline double AlternateBoundLhs(const PayoffTensor& t, const ScalingStep& step,
                                const MixedProfile& reference) {
  if (!step.d_next) {
    throw std::invalid_argument("AlternateBoundLhs: step has no d'");
  }
  return SelectorValue(t, *step.d_next, reference);
}

inline ScalingTrace ScalingIterate(const PayoffTensor& t, SelectorWeights d0,
                                   const ScalingOptions& options = {}) {
  if (!d0.strictly_positive()) {
    throw std::invalid_argument("ScalingIterate: d0 must be strictly positive");
  }
  if (options.max_iters < 1) {
    throw std::invalid_argument("ScalingIterate: max_iters must be >= 1");
  }
  ScalingTrace trace;
  SelectorWeights d = std::move(d0);
  for (int iter = 0;; ++iter) {
    try {
      trace.steps.push_back(ComputeScalingStep(t, d, options));
    } catch (const SolverError& e) {
      throw ScalingFailure(e, std::move(trace));
    }
    const ScalingStep& step = trace.steps.back();
    if (!step.d_next || step.d_next->min() <= options.pos_tol) {
      trace.stop_reason = ScalingStop::kBoundaryHit;
      break;
    }
    double change = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      change = std::max(change, std::abs((*step.d_next)[i] - d[i]));
    }
    if (change <= options.conv_tol) {
      trace.stop_reason = ScalingStop::kConverged;
      break;
    }
    if (iter + 1 >= options.max_iters) {
      trace.stop_reason = ScalingStop::kMaxIters;
      break;
    }
    d = *step.d_next;
  }
  return trace;
}

// Flat Dirichlet draw, redrawn until every entry exceeds pos_tol.
inline SelectorWeights RandomInteriorWeights(Rng& rng, int n,
                                             double pos_tol = 1e-9) {
  for (;;) {
    auto w = UniformSimplexPoint(rng, n);
    if (*std::min_element(w.begin(), w.end()) > pos_tol) {
      return SelectorWeights(std::move(w));
    }
  }
}

// Columns: iter, d1..dn, sigma, value, dprime1..dprimen, bound_rhs, t, eps,
// stop_reason. stop_reason is filled on the last row only; t is empty when
// undefined, as are d' and bound_rhs when sigma hit the threshold.
inline void WriteScalingCsv(const ScalingTrace& trace, int num_players,
                            std::ostream& out) {
  out << "iter";
  for (int i = 0; i < num_players; ++i) out << ",d" << (i + 1);
  out << ",sigma,value";
  for (int i = 0; i < num_players; ++i) out << ",dprime" << (i + 1);
  out << ",bound_rhs,t,eps,stop_reason\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const ScalingStep& s = trace.steps[k];
    out << k;
    for (int i = 0; i < num_players; ++i) out << ',' << FormatReal17(s.d[i]);
    out << ',' << FormatReal17(s.sigma) << ','
        << FormatReal17(s.solution.value);
    for (int i = 0; i < num_players; ++i) {
      out << ',';
      if (s.d_next) out << FormatReal17((*s.d_next)[i]);
    }
    out << ',';
    if (s.d_next) out << FormatReal17(s.bound_rhs);
    out << ',';
    if (s.quality.t) out << FormatReal17(*s.quality.t);
    out << ',' << FormatReal17(s.quality.epsilon) << ',';
    if (k + 1 == trace.steps.size()) out << ScalingStopName(trace.stop_reason);
    out << '\n';
  }
}

}  // namespace mulmin

#endif  // MULMIN_SCALING_H_
