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

#ifndef MULMIN_MINIMAX_H_
#define MULMIN_MINIMAX_H_

// The multilinear minimax pipeline:
//
//   1. Solve the dual LP for (q*, lambda*); recover x* from the multipliers
//      of its player rows.
//   2. Solve the primal LP directly for delta* when n̂ is small enough and
//      check |delta* - lambda*|.
//   3. Form the derived point p* from the marginals of q*.
//
// plus the saddle-point checker, the t-approximation quality report and the
// upper bounds on expected payoffs at an equilibrium.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mulmin/lp.h"
#include "mulmin/multilinear.h"
#include "mulmin/random.h"
#include "mulmin/tensor.h"

namespace mulmin {

inline constexpr double kSupportThreshold = 1e-9;
inline constexpr double kDualityGapTolerance = 1e-8;
inline constexpr double kSaddleSlack = 1e-7;
inline constexpr double kEqualityTolerance = 1e-7;
inline constexpr double kDefinedPayoffThreshold = 1e-9;

// Raised when an LP solve does not end at an optimum, or when the primal and
// dual optima disagree beyond kDualityGapTolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(LpStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

struct LpDiagnostics {
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  int iterations = 0;
  int bland_pivots = 0;
  double primal_residual = 0.0;
  double complementarity_residual = 0.0;

  static LpDiagnostics From(const LpSolution& s) {
    return {s.status,       s.objective,       s.iterations,
            s.bland_pivots, s.primal_residual, s.complementarity_residual};
  }
};

struct MinimaxSolution {
  SelectorWeights x_star;
  std::vector<double> q_star;  // canonical profile order
  MixedProfile p_star;         // derived point
  double value = 0.0;          // lambda* from the dual LP
  // delta* from the direct primal solve, or max_I sum_i a(i,I) x*_i when
  // the primal was skipped.
  double primal_value = 0.0;
  bool primal_solved = false;
  double duality_gap = 0.0;
  int support_size = 0;
  LpDiagnostics dual_lp;
  std::optional<LpDiagnostics> primal_lp;
};

struct MinimaxOptions {
  // The primal LP has n̂ + 1 rows; it is solved as a cross-check only up to
  // this many profiles.
  std::size_t primal_cross_check_limit = 4096;
  const LpSolver* solver = nullptr;  // nullptr: DenseSimplexSolver
};

// p^i_j = sum of q(I) over profiles I whose i-th coordinate is j.
inline MixedProfile DerivedPoint(const std::vector<double>& q,
                                 const GameShape& shape) {
  if (q.size() != shape.total_profiles()) {
    throw std::invalid_argument("DerivedPoint: q has the wrong length");
  }
  double sum = 0.0;
  for (double v : q) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("DerivedPoint: q must be nonnegative");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("DerivedPoint: q sums to " + FormatReal(sum));
  }
  std::vector<std::vector<double>> marginals(shape.num_players());
  for (int k = 0; k < shape.num_players(); ++k) {
    marginals[k].assign(shape.num_strategies(k), 0.0);
  }
  for (ProfileIterator it(shape); !it.done(); it.Next()) {
    const double w = q[it.flat_index()] / sum;
    for (int k = 0; k < shape.num_players(); ++k) {
      marginals[k][it.profile().indices[k]] += w;
    }
  }
  std::vector<MixedStrategy> strategies;
  for (auto& m : marginals) strategies.emplace_back(std::move(m));
  return MixedProfile(std::move(strategies));
}

inline int SupportSize(const std::vector<double>& q,
                       double threshold = kSupportThreshold) {
  return static_cast<int>(
      std::count_if(q.begin(), q.end(), [&](double v) { return v > threshold; }));
}

// max_I sum_i a(i,I) x_i, the primal objective at a fixed x.
inline double PrimalObjectiveAt(const PayoffTensor& t,
                                const SelectorWeights& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < t.shape().total_profiles(); ++f) {
    double s = 0.0;
    for (int i = 0; i < t.num_players(); ++i) s += x[i] * t.at(i, f);
    best = std::max(best, s);
  }
  return best;
}

namespace internal {

inline std::vector<double> ClampAndNormalize(std::vector<double> v) {
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(x, 0.0);
    sum += x;
  }
  if (!(sum > 0.0)) {
    throw SolverError(LpStatus::kOptimal,
                      "cannot normalize a vector with no positive entries");
  }
  for (double& x : v) x /= sum;
  return v;
}

}  // namespace internal

inline MinimaxSolution SolveMinimax(const PayoffTensor& t,
                                    const MinimaxOptions& options = {}) {
  DenseSimplexSolver default_solver;
  const LpSolver& solver =
      options.solver != nullptr ? *options.solver : default_solver;
  const int n = t.num_players();
  const std::size_t total = t.shape().total_profiles();

  MinimaxSolution s;
  const LinearProgram dual = BuildDual(t);
  const LpSolution dsol = solver.Solve(dual);
  s.dual_lp = LpDiagnostics::From(dsol);
  if (!dsol.optimal()) {
    throw SolverError(dsol.status, std::string("dual LP: ") +
                                       LpStatusName(dsol.status) + " " +
                                       dsol.message);
  }
  s.value = dsol.objective;
  s.q_star = internal::ClampAndNormalize(
      std::vector<double>(dsol.primal.begin(), dsol.primal.begin() + total));
  s.support_size = SupportSize(s.q_star);
  s.p_star = DerivedPoint(s.q_star, t.shape());

  // Player-row multipliers of a max problem with >= rows are <= 0; their
  // negation is a feasible primal x.
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -dsol.duals[i];
  s.x_star = SelectorWeights(internal::ClampAndNormalize(std::move(x)));

  if (total <= options.primal_cross_check_limit) {
    const LpSolution psol = solver.Solve(BuildPrimal(t));
    s.primal_lp = LpDiagnostics::From(psol);
    if (!psol.optimal()) {
      throw SolverError(psol.status, std::string("primal LP: ") +
                                         LpStatusName(psol.status) + " " +
                                         psol.message);
    }
    s.primal_value = psol.objective;
    s.primal_solved = true;
  } else {
    s.primal_value = PrimalObjectiveAt(t, s.x_star);
  }
  s.duality_gap = std::abs(s.primal_value - s.value);
  if (s.duality_gap > kDualityGapTolerance) {
    throw SolverError(LpStatus::kOptimal,
                      "duality gap " + FormatReal(s.duality_gap) +
                          " exceeds tolerance");
  }
  return s;
}

struct SaddleCheck {
  bool passed = false;
  // A_0[x*, p*], the middle term of both inequalities.
  double center = 0.0;
  // max over checks of A_0[x*, p] - center (left inequality).
  double worst_left = -std::numeric_limits<double>::infinity();
  // max over checks of center - A_0[x, p*] (right inequality).
  double worst_right = -std::numeric_limits<double>::infinity();
  double worst_violation = -std::numeric_limits<double>::infinity();
  // Which sweep produced the worst violation: "vertex_x", "vertex_p",
  // "sample_x" or "sample_p".
  std::string worst_source;
  int vertex_checks = 0;
  int sample_checks = 0;
};

// Checks A_0[x*, p] <= A_0[x*, p*] <= A_0[x, p*]. The exhaustive vertex
// sweep (x = e_i, p = e_I for every pure profile I) certifies both
// inequalities on the whole domain since each side is linear in x or
// multilinear in p; the random samples are extra coverage.
inline SaddleCheck VerifySaddle(const PayoffTensor& t, const MinimaxSolution& s,
                                int samples, std::uint64_t seed,
                                double slack = kSaddleSlack) {
  SaddleCheck c;
  c.center = SelectorValue(t, s.x_star, s.p_star);
  auto record = [&](double violation, double& side, const char* source) {
    side = std::max(side, violation);
    if (violation > c.worst_violation) {
      c.worst_violation = violation;
      c.worst_source = source;
    }
  };
  const int n = t.num_players();
  const auto pstar_payoffs = ExpectedPayoffs(t, s.p_star);
  for (int i = 0; i < n; ++i) {
    record(c.center - pstar_payoffs[i], c.worst_right, "vertex_x");
    ++c.vertex_checks;
  }
  for (std::size_t f = 0; f < t.shape().total_profiles(); ++f) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) v += s.x_star[i] * t.at(i, f);
    record(v - c.center, c.worst_left, "vertex_p");
    ++c.vertex_checks;
  }
  Rng rng(seed);
  for (int k = 0; k < samples; ++k) {
    SelectorWeights x(UniformSimplexPoint(rng, n));
    std::vector<MixedStrategy> strategies;
    for (int c2 : t.shape().strategy_counts()) {
      strategies.emplace_back(UniformSimplexPoint(rng, c2));
    }
    MixedProfile p(std::move(strategies));
    record(SelectorValue(t, s.x_star, p) - c.center, c.worst_left, "sample_p");
    record(c.center - SelectorValue(t, x, s.p_star), c.worst_right,
           "sample_x");
    c.sample_checks += 2;
  }
  c.passed = c.worst_violation <= slack;
  return c;
}

struct PlayerQuality {
  double expected = 0.0;
  double best_response_value = 0.0;
  int best_response_action = 0;
  double additive_gap = 0.0;        // epsilon_i
  std::optional<double> ratio;      // t_i, only when expected > 1e-9
};

struct QualityReport {
  std::vector<PlayerQuality> players;
  std::optional<double> t;  // max of the defined t_i
  bool all_t_defined = false;
  double epsilon = 0.0;     // max epsilon_i
};

// How close p is to an equilibrium: additive gaps eps_i = max_j A_i[p|e_j] -
// A_i[p] and, where A_i[p] > 0, ratios t_i with max_j A_i[p|e_j] = t_i A_i[p].
inline QualityReport Quality(const PayoffTensor& t, const MixedProfile& p) {
  QualityReport r;
  r.all_t_defined = true;
  r.epsilon = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < t.num_players(); ++i) {
    const auto dev = DeviationPayoffs(t, i, p);
    PlayerQuality q;
    for (int j = 0; j < p[i].size(); ++j) q.expected += p[i][j] * dev[j];
    q.best_response_value = dev[0];
    for (int j = 1; j < static_cast<int>(dev.size()); ++j) {
      if (dev[j] > q.best_response_value) {
        q.best_response_value = dev[j];
        q.best_response_action = j;
      }
    }
    q.additive_gap = q.best_response_value - q.expected;
    if (q.expected > kDefinedPayoffThreshold) {
      q.ratio = q.best_response_value / q.expected;
      r.t = r.t ? std::max(*r.t, *q.ratio) : *q.ratio;
    } else {
      r.all_t_defined = false;
    }
    r.epsilon = std::max(r.epsilon, q.additive_gap);
    r.players.push_back(q);
  }
  return r;
}

struct BoundsReport {
  std::vector<double> value_at_pstar;  // A_i[p*]
  double min_expected = 0.0;           // min_i A_i[p*]
  double selector_at_pstar = 0.0;      // A_0[x*, p*]
  // |value - min_i A_i[p*]| and whether it is within kEqualityTolerance.
  double equality_residual = 0.0;
  bool equality_holds = false;
  double x_star_min = 0.0;
  // value / (n x*_min), reported whenever x*_min > 1e-9.
  std::optional<double> sigma_bound;
  // Whether the bound's preconditions were checked on a reference
  // equilibrium (x*_min > 0 and A_i[p_ref] >= 0 for all i) and hold.
  bool sigma_bound_applicable = false;
  bool sigma_bound_preconditions_verified = false;

  // Present only when a reference equilibrium was supplied.
  struct Reference {
    std::vector<double> payoffs;  // A_i[p_ref]
    double selector_value = 0.0;  // A_0[x*, p_ref]
    double sigma = 0.0;           // average of A_i[p_ref]
    double bound1_slack = 0.0;    // value - A_0[x*, p_ref]
    bool bound1_holds = false;
    std::optional<double> bound2_slack;  // sigma_bound - sigma
    std::optional<bool> bound2_holds;
  };
  std::optional<Reference> reference;
};

inline BoundsReport ComputeBounds(
    const PayoffTensor& t, const MinimaxSolution& s,
    const std::optional<MixedProfile>& reference_eq = std::nullopt) {
  const int n = t.num_players();
  BoundsReport b;
  b.value_at_pstar = ExpectedPayoffs(t, s.p_star);
  b.min_expected =
      *std::min_element(b.value_at_pstar.begin(), b.value_at_pstar.end());
  b.selector_at_pstar = SelectorValue(t, s.x_star, s.p_star);
  b.equality_residual = std::abs(s.value - b.min_expected);
  b.equality_holds = b.equality_residual <= kEqualityTolerance;
  b.x_star_min = s.x_star.min();
  if (b.x_star_min > kDefinedPayoffThreshold) {
    b.sigma_bound = s.value / (n * b.x_star_min);
  }
  if (reference_eq) {
    BoundsReport::Reference ref;
    ref.payoffs = ExpectedPayoffs(t, *reference_eq);
    ref.selector_value = SelectorValue(t, s.x_star, *reference_eq);
    double total = 0.0;
    bool nonnegative = true;
    for (double v : ref.payoffs) {
      total += v;
      nonnegative = nonnegative && v >= 0.0;
    }
    ref.sigma = total / n;
    ref.bound1_slack = s.value - ref.selector_value;
    ref.bound1_holds = ref.bound1_slack >= -kSaddleSlack;
    b.sigma_bound_preconditions_verified = true;
    b.sigma_bound_applicable = b.sigma_bound.has_value() && nonnegative;
    if (b.sigma_bound_applicable) {
      ref.bound2_slack = *b.sigma_bound - ref.sigma;
      ref.bound2_holds = *ref.bound2_slack >= -kSaddleSlack;
    }
    b.reference = std::move(ref);
  }
  return b;
}

}  // namespace mulmin

#endif  // MULMIN_MINIMAX_H_
