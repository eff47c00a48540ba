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

#include "mulmin/scaling.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mulmin/oracle.h"
#include "test_util.h"

namespace mulmin {
namespace {

TEST(ScaleTest, MultipliesEachPlayer) {
  PayoffTensor t = PrisonersDilemma();
  PayoffTensor s = Scale(t, SelectorWeights({0.25, 0.75}));
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_EQ(s.at(0, f), 0.25 * t.at(0, f));
    EXPECT_EQ(s.at(1, f), 0.75 * t.at(1, f));
  }
}

TEST(ScaleTest, UnitWeightOnOnePlayerIsIdentity) {
  PayoffTensor t(GameShape({3}), {1, -2, 4});
  EXPECT_EQ(Scale(t, SelectorWeights({1.0})), t);
}

TEST(ScaleTest, Errors) {
  PayoffTensor t = PrisonersDilemma();
  EXPECT_THROW(Scale(t, SelectorWeights({1.0, 0.0})), std::invalid_argument);
  EXPECT_THROW(Scale(t, SelectorWeights({1.0})), std::invalid_argument);
  EXPECT_THROW(ScalingIterate(t, SelectorWeights({0.0, 1.0})),
               std::invalid_argument);
}

// A_i(d)[p|e_j] - A_i(d)[p] = d_i (A_i[p|e_j] - A_i[p]).
TEST(ScaleProperty, GainsScaleByWeight) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    GameShape shape = testing::RandomShape(rng, 4, 3);
    PayoffTensor t = RandomGame(shape, rng(), -1, 1);
    SelectorWeights d = RandomInteriorWeights(rng, shape.num_players());
    MixedProfile p = testing::RandomProfile(rng, shape);
    PayoffTensor td = Scale(t, d);
    for (int i = 0; i < shape.num_players(); ++i) {
      const double base = testing::ExpectedOracle(t, i, p);
      const double scaled = testing::ExpectedOracle(td, i, p);
      for (int j = 0; j < shape.num_strategies(i); ++j) {
        const double g = testing::DeviationOracle(t, i, p, j) - base;
        const double gd = testing::DeviationOracle(td, i, p, j) - scaled;
        EXPECT_NEAR(gd, d[i] * g, 1e-12 * std::max(1.0, std::abs(d[i] * g)));
      }
    }
  }
}

TEST(ScaleProperty, UniformWeightsDivideValue) {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    GameShape shape = testing::RandomShape(rng, 4, 3);
    PayoffTensor t = RandomGame(shape, rng(), -1, 1);
    const int n = shape.num_players();
    const double v = SolveMinimax(t).value;
    const double vd = SolveMinimax(Scale(t, SelectorWeights::Uniform(n))).value;
    EXPECT_NEAR(vd, v / n, 1e-8);
  }
}

TEST(ScalingStepTest, OnePlayerConvergesImmediately) {
  PayoffTensor t(GameShape({2}), {3, 5});
  ScalingTrace trace = ScalingIterate(t, SelectorWeights({1.0}));
  ASSERT_EQ(trace.steps.size(), 1u);
  EXPECT_EQ(trace.stop_reason, ScalingStop::kConverged);
  EXPECT_NEAR(trace.steps[0].sigma, 1.0, 1e-12);
  EXPECT_NEAR(trace.steps[0].bound_rhs, 5.0, 1e-12);
}

TEST(ScalingStepTest, FieldsAreConsistent) {
  PayoffTensor t = PrisonersDilemma();
  SelectorWeights d({0.9, 0.1});
  ScalingStep step = ComputeScalingStep(t, d);
  double sigma = 0.0;
  for (int i = 0; i < 2; ++i) sigma += d[i] * step.solution.x_star[i];
  EXPECT_NEAR(step.sigma, sigma, 1e-15);
  ASSERT_TRUE(step.d_next.has_value());
  double rhs = 0.0;
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR((*step.d_next)[i], d[i] * step.solution.x_star[i] / sigma,
                1e-15);
    rhs += (*step.d_next)[i] *
           testing::ExpectedOracle(t, i, step.solution.p_star);
  }
  EXPECT_NEAR(step.bound_rhs, rhs, 1e-12);
  // At the pure equilibrium (D,D) the left side is sum_i d'_i * 1.
  MixedProfile dd = MixedProfile::Pure(t.shape(), PureProfile{{1, 1}});
  EXPECT_NEAR(AlternateBoundLhs(t, step, dd), 1.0, 1e-12);
}

TEST(ScalingStepTest, NextWeightsOnSimplex) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    GameShape shape = testing::RandomShape(rng, 3, 3);
    PayoffTensor t = RandomGame(shape, rng(), 0, 1);
    ScalingStep step = ComputeScalingStep(
        t, RandomInteriorWeights(rng, shape.num_players()));
    if (!step.d_next) continue;
    double sum = 0.0;
    for (double w : step.d_next->weights()) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(ScalingIterateTest, MaxItersAndDeterminism) {
  PayoffTensor t = RandomGame(GameShape({3, 3}), 17, 0, 1);
  ScalingOptions opts;
  opts.max_iters = 3;
  opts.conv_tol = 0.0;
  ScalingTrace a = ScalingIterate(t, SelectorWeights({0.3, 0.7}), opts);
  ScalingTrace b = ScalingIterate(t, SelectorWeights({0.3, 0.7}), opts);
  EXPECT_LE(a.steps.size(), 3u);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  if (a.stop_reason != ScalingStop::kBoundaryHit) {
    EXPECT_EQ(a.stop_reason, ScalingStop::kMaxIters);
  }
  std::ostringstream ca, cb;
  WriteScalingCsv(a, 2, ca);
  WriteScalingCsv(b, 2, cb);
  EXPECT_EQ(ca.str(), cb.str());
}

TEST(ScalingCsvTest, Header) {
  PayoffTensor t(GameShape({2}), {3, 5});
  std::ostringstream out;
  WriteScalingCsv(ScalingIterate(t, SelectorWeights({1.0})), 1, out);
  std::istringstream in(out.str());
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_FALSE(std::getline(in, extra));
  EXPECT_EQ(header, "iter,d1,sigma,value,dprime1,bound_rhs,t,eps,stop_reason");
  std::vector<std::string> fields;
  std::stringstream cells(row);
  for (std::string cell; std::getline(cells, cell, ',');) fields.push_back(cell);
  ASSERT_EQ(fields.size(), 9u);
  EXPECT_EQ(fields[0], "0");
  EXPECT_NEAR(std::stod(fields[3]), 5.0, 1e-12);
  EXPECT_EQ(fields[8], "converged");
}

// Regression pin for a seeded 2x2 ensemble in [0, 1]; guards the iteration
// order and stopping rules.
TEST(ScalingIterateTest, StopReasonCountsPinned) {
  std::map<std::string, int> counts;
  for (int k = 0; k < 40; ++k) {
    PayoffTensor t = RandomGame(GameShape({2, 2}), DeriveSeed(7, k), 0, 1);
    Rng rng(DeriveSeed(8, k));
    ScalingTrace trace = ScalingIterate(t, RandomInteriorWeights(rng, 2));
    ++counts[ScalingStopName(trace.stop_reason)];
  }
  EXPECT_EQ(counts["converged"], 4);
  EXPECT_EQ(counts["boundary_hit"], 35);
  EXPECT_EQ(counts["max_iters"], 1);
}

}  // namespace
}  // namespace mulmin
