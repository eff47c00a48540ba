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

#ifndef MULMIN_ORACLE_H_
#define MULMIN_ORACLE_H_

// Brute-force ground truth for tiny games: pure equilibria by exhaustion,
// the closed-form 2x2 mixed equilibrium, support enumeration, and a grid
// search for the minimax value. Every certificate handed out has been
// re-checked with the gain residual; candidates that fail are dropped, so the
// oracle is sound but not complete beyond 2x2.

#include <Eigen/Dense>

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

#include "mulmin/multilinear.h"
#include "mulmin/nashmap.h"
#include "mulmin/tensor.h"

namespace mulmin {

inline constexpr double kCertificateResidual = 1e-9;

enum class CertificateKind { kPure, kMixed2x2ClosedForm, kSupportEnumeration };

inline const char* CertificateKindName(CertificateKind k) {
  switch (k) {
    case CertificateKind::kPure:
      return "pure";
    case CertificateKind::kMixed2x2ClosedForm:
      return "mixed_2x2_closed_form";
    case CertificateKind::kSupportEnumeration:
      return "support_enumeration";
  }
  return "unknown";
}

struct EquilibriumCertificate {
  MixedProfile profile;
  CertificateKind kind = CertificateKind::kPure;
  double residual = 0.0;  // max gain G^i_j at profile
};

// Raised instead of silently truncating a search.
class OracleRefusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical fixtures. Player 1 picks the row (first index); actions are
// listed in canonical profile order (1,1), (1,2), (2,1), (2,2).

// Player 1 wins +1 on a match, player 2 wins +1 on a mismatch.
inline PayoffTensor MatchingPennies() {
  return PayoffTensor(GameShape({2, 2}),
                      {1, -1, -1, 1,    //
                       -1, 1, 1, -1});
}

// Action 1 = cooperate, 2 = defect; T=5, R=3, P=1, S=0.
inline PayoffTensor PrisonersDilemma() {
  return PayoffTensor(GameShape({2, 2}),
                      {3, 0, 5, 1,  //
                       3, 5, 0, 1});
}

// Coordination on (1,1) pays (2,1), on (2,2) pays (1,2), miscoordination 0.
inline PayoffTensor BattleOfSexes() {
  return PayoffTensor(GameShape({2, 2}),
                      {2, 0, 0, 1,  //
                       1, 0, 0, 2});
}

// Every I with a(i, I) >= a(i, I') for each player i and each unilateral
// deviation I' of player i.
inline std::vector<PureProfile> PureEquilibria(const PayoffTensor& t) {
  const GameShape& shape = t.shape();
  std::vector<PureProfile> out;
  for (ProfileIterator it(shape); !it.done(); it.Next()) {
    const auto& idx = it.profile().indices;
    const std::size_t flat = it.flat_index();
    bool stable = true;
    for (int i = 0; i < shape.num_players() && stable; ++i) {
      const std::size_t stride = shape.stride(i);
      const std::size_t base = flat - idx[i] * stride;
      const double own = t.at(i, flat);
      for (int j = 0; j < shape.num_strategies(i); ++j) {
        if (t.at(i, base + j * stride) > own) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(it.profile());
  }
  return out;
}

struct Mixed2x2Result {
  std::optional<EquilibriumCertificate> certificate;
  // Set when an indifference equation has no unique solution.
  bool degenerate = false;
};

// Solves each player's indifference condition for the opponent's mixing
// probability on action 1.
inline Mixed2x2Result Mixed2x2(const PayoffTensor& t) {
  if (!(t.shape() == GameShape({2, 2}))) {
    throw std::invalid_argument("Mixed2x2: needs a 2-player 2x2 game");
  }
  auto a = [&](int player, int row, int col) {
    return t.at(player, static_cast<std::size_t>(2 * row + col));
  };
  Mixed2x2Result r;
  // Player 1 indifferent between rows given column mix (q, 1-q).
  const double den_q = a(0, 0, 0) - a(0, 0, 1) - a(0, 1, 0) + a(0, 1, 1);
  // Player 2 indifferent between columns given row mix (p, 1-p).
  const double den_p = a(1, 0, 0) - a(1, 1, 0) - a(1, 0, 1) + a(1, 1, 1);
  if (den_q == 0.0 || den_p == 0.0) {
    r.degenerate = true;
    return r;
  }
  const double q = (a(0, 1, 1) - a(0, 0, 1)) / den_q;
  const double p = (a(1, 1, 1) - a(1, 1, 0)) / den_p;
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) return r;
  MixedProfile profile({MixedStrategy({p, 1.0 - p}),
                        MixedStrategy({q, 1.0 - q})});
  const double residual = NashResidual(t, profile);
  if (residual <= kCertificateResidual) {
    r.certificate = EquilibriumCertificate{
        std::move(profile), CertificateKind::kMixed2x2ClosedForm, residual};
  }
  return r;
}

namespace internal {

// M[j][l] = A_i[p | e_j for player i, e_l for player k], k != i.
inline Eigen::MatrixXd PairDeviation(const PayoffTensor& t, int i, int k,
                                     const std::vector<Eigen::VectorXd>& p) {
  const GameShape& shape = t.shape();
  Eigen::MatrixXd m =
      Eigen::MatrixXd::Zero(shape.num_strategies(i), shape.num_strategies(k));
  auto a = t.player_payoffs(i);
  for (ProfileIterator it(shape); !it.done(); it.Next()) {
    const auto& idx = it.profile().indices;
    double w = a[it.flat_index()];
    for (int m2 = 0; m2 < shape.num_players() && w != 0.0; ++m2) {
      if (m2 != i && m2 != k) w *= p[m2](idx[m2]);
    }
    m(idx[i], idx[k]) += w;
  }
  return m;
}

// Indifference system for fixed supports. Unknowns are the support
// probabilities of every player followed by the n values v_i; equations are
// A_i[p|e_j] - v_i = 0 for j in S_i and sum_{S_i} p^i = 1.
class SupportSystem {
 public:
  SupportSystem(const PayoffTensor& t, std::vector<std::vector<int>> supports)
      : t_(t), supports_(std::move(supports)) {
    for (const auto& s : supports_) {
      offsets_.push_back(num_probs_);
      num_probs_ += static_cast<int>(s.size());
    }
    size_ = num_probs_ + t.num_players();
  }

  int size() const { return size_; }

  std::vector<Eigen::VectorXd> Unpack(const Eigen::VectorXd& z) const {
    std::vector<Eigen::VectorXd> p;
    for (int i = 0; i < t_.num_players(); ++i) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(t_.shape().num_strategies(i));
      for (std::size_t s = 0; s < supports_[i].size(); ++s) {
        v(supports_[i][s]) = z(offsets_[i] + static_cast<int>(s));
      }
      p.push_back(std::move(v));
    }
    return p;
  }

  Eigen::VectorXd Start() const {
    Eigen::VectorXd z(size_);
    for (int i = 0; i < t_.num_players(); ++i) {
      for (std::size_t s = 0; s < supports_[i].size(); ++s) {
        z(offsets_[i] + static_cast<int>(s)) = 1.0 / supports_[i].size();
      }
    }
    z.tail(t_.num_players()).setZero();
    auto p = Unpack(z);
    for (int i = 0; i < t_.num_players(); ++i) {
      const Eigen::VectorXd dev = Deviations(i, p);
      double v = 0.0;
      for (int j : supports_[i]) v += dev(j);
      z(num_probs_ + i) = v / supports_[i].size();
    }
    return z;
  }

  // Residual vector F(z) and, when jac != nullptr, its Jacobian.
  Eigen::VectorXd Evaluate(const Eigen::VectorXd& z,
                           Eigen::MatrixXd* jac) const {
    const int n = t_.num_players();
    auto p = Unpack(z);
    Eigen::VectorXd f(size_);
    if (jac) jac->setZero(size_, size_);
    int row = 0;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd dev = Deviations(i, p);
      for (int j : supports_[i]) {
        f(row) = dev(j) - z(num_probs_ + i);
        if (jac) {
          (*jac)(row, num_probs_ + i) = -1.0;
          for (int k = 0; k < n; ++k) {
            if (k == i) continue;
            // Recomputed per row; the games handled here are tiny.
            const Eigen::MatrixXd m = PairDeviation(t_, i, k, p);
            for (std::size_t s = 0; s < supports_[k].size(); ++s) {
              (*jac)(row, offsets_[k] + static_cast<int>(s)) =
                  m(j, supports_[k][s]);
            }
          }
        }
        ++row;
      }
    }
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t s = 0; s < supports_[i].size(); ++s) {
        sum += z(offsets_[i] + static_cast<int>(s));
        if (jac) (*jac)(row, offsets_[i] + static_cast<int>(s)) = 1.0;
      }
      f(row) = sum - 1.0;
      ++row;
    }
    return f;
  }

 private:
  // A_i[p | e_j] for all j.
  Eigen::VectorXd Deviations(int i, const std::vector<Eigen::VectorXd>& p) const {
    const GameShape& shape = t_.shape();
    Eigen::VectorXd dev = Eigen::VectorXd::Zero(shape.num_strategies(i));
    auto a = t_.player_payoffs(i);
    for (ProfileIterator it(shape); !it.done(); it.Next()) {
      const auto& idx = it.profile().indices;
      double w = a[it.flat_index()];
      for (int k = 0; k < shape.num_players() && w != 0.0; ++k) {
        if (k != i) w *= p[k](idx[k]);
      }
      dev(idx[i]) += w;
    }
    return dev;
  }

  const PayoffTensor& t_;
  std::vector<std::vector<int>> supports_;
  std::vector<int> offsets_;
  int num_probs_ = 0;
  int size_ = 0;
};

// Damped Gauss-Newton from the uniform point on the supports. Returns the
// candidate profile, or nothing if the iteration leaves the simplex.
inline std::optional<MixedProfile> SolveSupport(
    const PayoffTensor& t, const std::vector<std::vector<int>>& supports) {
  SupportSystem sys(t, supports);
  Eigen::VectorXd z = sys.Start();
  Eigen::MatrixXd jac;
  Eigen::VectorXd f = sys.Evaluate(z, &jac);
  double norm = f.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < 100 && norm > 1e-14; ++iter) {
    Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls) {
      Eigen::VectorXd trial = z + alpha * step;
      Eigen::VectorXd ft = sys.Evaluate(trial, nullptr);
      const double nt = ft.lpNorm<Eigen::Infinity>();
      if (nt < norm) {
        z = trial;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;
    f = sys.Evaluate(z, &jac);
    norm = f.lpNorm<Eigen::Infinity>();
  }
  auto p = sys.Unpack(z);
  std::vector<MixedStrategy> strategies;
  for (auto& v : p) {
    std::vector<double> probs(v.data(), v.data() + v.size());
    double sum = 0.0;
    for (double& x : probs) {
      if (!std::isfinite(x) || x < -1e-12) return std::nullopt;
      x = std::max(x, 0.0);
      sum += x;
    }
    if (!(sum > 0.0) || std::abs(sum - 1.0) > 1e-9) return std::nullopt;
    for (double& x : probs) x /= sum;
    strategies.emplace_back(std::move(probs));
  }
  return MixedProfile(std::move(strategies));
}

inline double MaxDifference(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (int i = 0; i < a.num_players(); ++i) {
    for (int j = 0; j < a[i].size(); ++j) {
      d = std::max(d, std::abs(a[i][j] - b[i][j]));
    }
  }
  return d;
}

}  // namespace internal

// Number of support combinations, prod_i (2^{n_i} - 1), saturating at the
// maximum of uint64.
inline std::uint64_t SupportCombinationCount(const GameShape& shape) {
  std::uint64_t total = 1;
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  for (int c : shape.strategy_counts()) {
    if (c >= 63) return cap;
    const std::uint64_t k = (std::uint64_t{1} << c) - 1;
    if (total > cap / k) return cap;
    total *= k;
  }
  return total;
}

// Solves the indifference system on every combination of supports and keeps
// the candidates whose gain residual is <= kCertificateResidual. Duplicates
// (max-norm distance <= 1e-7) are reported once.
inline std::vector<EquilibriumCertificate> SupportEnumeration(
    const PayoffTensor& t, std::uint64_t max_profiles_budget) {
  const GameShape& shape = t.shape();
  const std::uint64_t combos = SupportCombinationCount(shape);
  if (combos > max_profiles_budget) {
    throw OracleRefusal("support enumeration needs " + std::to_string(combos) +
                        " support combinations, budget is " +
                        std::to_string(max_profiles_budget));
  }
  const int n = shape.num_players();
  std::vector<std::uint32_t> mask(n, 1);
  std::vector<EquilibriumCertificate> out;
  for (;;) {
    std::vector<std::vector<int>> supports(n);
    bool all_singletons = true;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < shape.num_strategies(i); ++j) {
        if (mask[i] & (1u << j)) supports[i].push_back(j);
      }
      all_singletons = all_singletons && supports[i].size() == 1;
    }
    std::optional<MixedProfile> candidate;
    if (all_singletons) {
      PureProfile pure{std::vector<int>(n)};
      for (int i = 0; i < n; ++i) pure.indices[i] = supports[i][0];
      candidate = MixedProfile::Pure(shape, pure);
    } else {
      candidate = internal::SolveSupport(t, supports);
    }
    if (candidate) {
      const double residual = NashResidual(t, *candidate);
      const bool duplicate = std::any_of(
          out.begin(), out.end(), [&](const EquilibriumCertificate& c) {
            return internal::MaxDifference(c.profile, *candidate) <= 1e-7;
          });
      if (residual <= kCertificateResidual && !duplicate) {
        out.push_back({std::move(*candidate),
                       all_singletons ? CertificateKind::kPure
                                      : CertificateKind::kSupportEnumeration,
                       residual});
      }
    }
    // Advance the odometer over nonempty support masks.
    int k = n - 1;
    for (; k >= 0; --k) {
      if (++mask[k] < (1u << shape.num_strategies(k))) break;
      mask[k] = 1;
    }
    if (k < 0) break;
  }
  return out;
}

// min over the grid {x in S_n : r x integral} of max_I sum_i a(i,I) x_i.
// An upper bound on the minimax value that is exact as r grows.
inline double GridMinimax(const PayoffTensor& t, int resolution) {
  const int n = t.num_players();
  if (n > 3) {
    throw OracleRefusal("GridMinimax: grid search supports at most 3 players");
  }
  if (resolution < 1) {
    throw std::invalid_argument("GridMinimax: resolution must be >= 1");
  }
  const std::size_t total = t.shape().total_profiles();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> k(n, 0);
  auto evaluate = [&] {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < total; ++f) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        s += (static_cast<double>(k[i]) / resolution) * t.at(i, f);
      }
      worst = std::max(worst, s);
    }
    best = std::min(best, worst);
  };
  if (n == 1) {
    k[0] = resolution;
    evaluate();
  } else if (n == 2) {
    for (int a = 0; a <= resolution; ++a) {
      k = {a, resolution - a};
      evaluate();
    }
  } else {
    for (int a = 0; a <= resolution; ++a) {
      for (int b = 0; a + b <= resolution; ++b) {
        k = {a, b, resolution - a - b};
        evaluate();
      }
    }
  }
  return best;
}

// All certificates the oracle can produce for a game within budget: support
// enumeration (which includes the pure equilibria), plus the closed-form 2x2
// point when it is new.
inline std::vector<EquilibriumCertificate> OracleEquilibria(
    const PayoffTensor& t, std::uint64_t budget = 4096) {
  auto certs = SupportEnumeration(t, budget);
  if (t.shape() == GameShape({2, 2})) {
    auto mixed = Mixed2x2(t);
    if (mixed.certificate) {
      const bool duplicate = std::any_of(
          certs.begin(), certs.end(), [&](const EquilibriumCertificate& c) {
            return internal::MaxDifference(c.profile,
                                           mixed.certificate->profile) <= 1e-7;
          });
      if (!duplicate) certs.push_back(std::move(*mixed.certificate));
    }
  }
  return certs;
}

}  // namespace mulmin

#endif  // MULMIN_ORACLE_H_
