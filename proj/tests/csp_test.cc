// Copyright 2026 The NLNS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlns/csp.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "nlns/errors.h"
#include "nlns/io.h"
#include "test_util.h"

namespace nlns {
namespace {

using testing::OracleViolations;
using testing::RandomAssignment;

TEST(CspInstanceTest, RejectsOutOfRangeScope) {
  EXPECT_THROW(CspInstance(ProblemKind::kGraphColoring, 2, {0, 1},
                           {{ConstraintKind::kNotEqual, {0, 2}, 1.0}}),
               StructureError);
}

TEST(CspInstanceTest, RejectsBadConstraintShapes) {
  EXPECT_THROW(CspInstance(ProblemKind::kGraphColoring, 3, {0, 1},
                           {{ConstraintKind::kNotEqual, {0, 1, 2}, 1.0}}),
               StructureError);
  EXPECT_THROW(CspInstance(ProblemKind::kSudoku, 3, {1, 2},
                           {{ConstraintKind::kAllDifferent, {0}, 1.0}}),
               StructureError);
  EXPECT_THROW(CspInstance(ProblemKind::kGraphColoring, 2, {0, 1},
                           {{ConstraintKind::kNotEqual, {0, 1}, 0.0}}),
               StructureError);
  // Kind determines the allowed constraint family.
  EXPECT_THROW(CspInstance(ProblemKind::kSudoku, 2, {1, 2},
                           {{ConstraintKind::kNotEqual, {0, 1}, 1.0}}),
               StructureError);
  EXPECT_THROW(CspInstance(ProblemKind::kGraphColoring, 2, {}, {}), StructureError);
}

TEST(CspInstanceTest, RejectsInvalidGiven) {
  EXPECT_THROW(CspInstance(ProblemKind::kGraphColoring, 2, {0, 1}, {}, {kFree, 2}),
               StructureError);
}

TEST(EvalHardTest, CompleteValidGridIsFeasible) {
  const CspInstance grid = ParseSudoku(testing::kSolved4x4);
  Assignment x;
  for (int i = 0; i < 16; ++i) x.values.push_back(grid.given_value(i));
  const HardEvaluation eval = EvalHard(grid, x);
  EXPECT_EQ(eval.violated_count, 0);
  EXPECT_TRUE(eval.violated_ids.empty());
}

TEST(EvalHardTest, EqualEndpointsViolateNotEqual) {
  const CspInstance edge = testing::SingleEdge(3);
  EXPECT_EQ(EvalHard(edge, {{2, 2}}).violated_count, 1);
  EXPECT_EQ(EvalHard(edge, {{0, 2}}).violated_count, 0);
}

TEST(EvalHardTest, MatchesDuplicateScanOnRandomGrids) {
  const CspInstance grid = testing::EmptySudoku(3);
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Assignment x = RandomAssignment(grid, rng);
    EXPECT_EQ(EvalHard(grid, x).violated_ids, OracleViolations(grid, x));
  }
}

TEST(EvalHardTest, RejectsInvalidAssignment) {
  const CspInstance edge = testing::SingleEdge(2);
  EXPECT_THROW(EvalHard(edge, {{0}}), StructureError);
  EXPECT_THROW(EvalHard(edge, {{0, 5}}), StructureError);
}

TEST(ConstraintPenaltyTest, NotEqualCases) {
  const Constraint c{ConstraintKind::kNotEqual, {0, 1}, 1.0};
  SoftAssignment same{Matrix{{0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}}};
  SoftAssignment differ{Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};
  SoftAssignment uniform{Matrix::Constant(2, 3, 1.0 / 3.0)};
  EXPECT_DOUBLE_EQ(ConstraintPenalty(c, same), 1.0);
  EXPECT_DOUBLE_EQ(ConstraintPenalty(c, differ), 0.0);
  EXPECT_NEAR(ConstraintPenalty(c, uniform), 1.0 / 3.0, 1e-15);
}

TEST(ConstraintPenaltyTest, AllDifferentCountsEqualPairs) {
  const Constraint c{ConstraintKind::kAllDifferent, {0, 1, 2}, 1.0};
  SoftAssignment all_same{Matrix{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}};
  EXPECT_DOUBLE_EQ(ConstraintPenalty(c, all_same), 3.0);  // C(3, 2)
}

TEST(ConstraintPenaltyTest, RejectsMalformedRows) {
  const Constraint c{ConstraintKind::kNotEqual, {0, 1}, 1.0};
  EXPECT_THROW(ConstraintPenalty(c, {Matrix{{0.5, 0.6}, {0.5, 0.5}}}), DomainError);
  EXPECT_THROW(ConstraintPenalty(c, {Matrix{{1.5, -0.5}, {0.5, 0.5}}}), DomainError);
}

TEST(TotalLossTest, FeasibleOneHotIsZero) {
  const CspInstance tri = testing::Triangle(3);
  const PenaltyReport r = TotalLoss(tri, OneHot(tri, {{0, 1, 2}}));
  EXPECT_EQ(r.total_loss, 0.0);
  EXPECT_EQ(r.violated_count, 0);
}

TEST(TotalLossTest, SingleEqualEdgeIsOne) {
  const CspInstance edge = testing::SingleEdge(2);
  EXPECT_DOUBLE_EQ(TotalLoss(edge, OneHot(edge, {{1, 1}})).total_loss, 1.0);
}

TEST(TotalLossTest, MatchesSummationOracle) {
  const CspInstance tri = testing::Triangle(4);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = testing::RandomProbabilities(3, 4, rng);
    EXPECT_NEAR(TotalLoss(tri, {q}).total_loss, testing::OracleLoss(tri, q), 1e-12);
  }
}

TEST(TotalLossTest, PenaltyBounds) {
  const CspInstance grid = testing::EmptySudoku(2);
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const PenaltyReport r =
        TotalLoss(grid, {testing::RandomProbabilities(16, 4, rng)});
    for (double p : r.per_constraint) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 6.0 + 1e-12);  // C(4, 2)
    }
  }
}

TEST(CostTest, MaxCutCutPlusCostIsEdgeCount) {
  const CspInstance edge = testing::SingleEdge(2, ProblemKind::kMaxCut);
  EXPECT_EQ(Cost(edge, {{0, 1}}), 0);
  EXPECT_EQ(CutSize(edge, {{0, 1}}), 1);

  Rng rng(8);
  const CspInstance g =
      BuildInstance(GenRandomGraph(20, 0.3, rng), ProblemKind::kMaxCut, 2);
  for (int trial = 0; trial < 30; ++trial) {
    const Assignment x = RandomAssignment(g, rng);
    int uncut = 0;
    for (const Constraint& c : g.constraints()) {
      uncut += x.values[c.scope[0]] == x.values[c.scope[1]];
    }
    EXPECT_EQ(Cost(g, x), uncut);
    EXPECT_EQ(CutSize(g, x) + Cost(g, x), g.num_constraints());
  }
}

TEST(CostTest, InvariantUnderConstraintPermutation) {
  Rng rng(21);
  const CspInstance g = testing::RandomColoring(15, 0.3, 3, rng);
  std::vector<Constraint> shuffled = g.constraints();
  std::reverse(shuffled.begin(), shuffled.end());
  const CspInstance h(g.kind(), g.num_variables(), g.domain_values(), shuffled);
  for (int trial = 0; trial < 20; ++trial) {
    const Assignment x = RandomAssignment(g, rng);
    EXPECT_EQ(Cost(g, x), Cost(h, x));
  }
}

TEST(OneHotTest, RowsAndRoundTrip) {
  const CspInstance g = testing::SingleEdge(4);
  const SoftAssignment q = OneHot(g, {{2, 0}});
  EXPECT_EQ(q.q.row(0), (RowVector(4) << 0, 0, 1, 0).finished());
  Rng rng(4);
  const CspInstance grid = testing::EmptySudoku(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Assignment x = RandomAssignment(grid, rng);
    EXPECT_EQ(ArgmaxAssignment(OneHot(grid, x).q), x);
  }
}

TEST(OneHotTest, ZeroLossIffFeasible) {
  Rng rng(9);
  const CspInstance g = testing::RandomColoring(8, 0.3, 3, rng);
  int feasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Assignment x = RandomAssignment(g, rng);
    const bool zero = TotalLoss(g, OneHot(g, x)).total_loss == 0.0;
    const bool ok = OracleViolations(g, x).empty();
    EXPECT_EQ(zero, ok);
    feasible += ok;
  }
  EXPECT_GT(feasible, 0);
}

}  // namespace
}  // namespace nlns
