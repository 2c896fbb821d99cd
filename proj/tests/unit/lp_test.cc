#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "icsp/common/error.h"
#include "icsp/common/rng.h"
#include "icsp/lp/linear_program.h"
#include "icsp/lp/lp_format.h"
#include "icsp/lp/simplex.h"
#include "icsp/lp/vertex_enumeration.h"
#include "test_support.h"

namespace icsp::lp {
namespace {

using icsp::testing::Near;
using icsp::testing::RandomBoundedLp;

TEST(LinearProgram, RejectsBadModels) {
  LinearProgram lp;
  EXPECT_THROW(lp.AddVariable(1.0, 0.0, 0.0), Error);
  lp.AddVariable(0.0, 1.0, 1.0);
  EXPECT_THROW(lp.AddConstraint({1}, {1.0}, RowSense::kLessEqual, 1.0), Error);
  EXPECT_THROW(lp.AddConstraint({0, 0}, {1.0, 2.0}, RowSense::kLessEqual, 1.0), Error);
}

TEST(Simplex, SingleActiveBound) {
  LinearProgram lp;
  lp.AddVariable(0.0, kInf, 1.0);
  lp.AddConstraint({0}, {1.0}, RowSense::kGreaterEqual, 3.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[0], 3.0, 1e-12);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
  EXPECT_NEAR(s.dual[0], 1.0, 1e-12);
}

TEST(Simplex, ContradictoryConstraintsAreInfeasible) {
  LinearProgram lp;
  lp.AddVariable(0.0, kInf, 0.0);
  lp.AddConstraint({0}, {1.0}, RowSense::kLessEqual, -1.0);
  const LpSolution s = SolveLp(lp);
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
  EXPECT_TRUE(s.primal.empty());
  EXPECT_TRUE(s.dual.empty());
}

TEST(Simplex, DetectsUnbounded) {
  LinearProgram lp;
  lp.AddVariable(0.0, kInf, -1.0);
  lp.AddVariable(-kInf, kInf, 0.0);
  lp.AddConstraint({0, 1}, {1.0, -1.0}, RowSense::kLessEqual, 2.0);
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, FreeVariablesAndEqualities) {
  // min x + 2y  s.t. x - y = 1, x + y >= 3, both free.  -> x = 2, y = 1.
  LinearProgram lp;
  lp.AddVariable(-kInf, kInf, 1.0);
  lp.AddVariable(-kInf, kInf, 2.0);
  lp.AddConstraint({0, 1}, {1.0, -1.0}, RowSense::kEqual, 1.0);
  lp.AddConstraint({0, 1}, {1.0, 1.0}, RowSense::kGreaterEqual, 3.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.primal[0], 2.0, 1e-9);
  EXPECT_NEAR(s.primal[1], 1.0, 1e-9);
  EXPECT_NEAR(s.objective, 4.0, 1e-9);
  EXPECT_NEAR(DualObjective(lp, s), 4.0, 1e-9);
}

TEST(Simplex, MaximizeKnapsackRelaxation) {
  // max 5a + 4b, 3a + 2b <= 4, a, b in [0,1]  -> a = 2/3, b = 1, value 22/3.
  LinearProgram lp;
  lp.set_sense(ObjectiveSense::kMaximize);
  lp.AddVariable(0.0, 1.0, 5.0);
  lp.AddVariable(0.0, 1.0, 4.0);
  lp.AddConstraint({0, 1}, {3.0, 2.0}, RowSense::kLessEqual, 4.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, 22.0 / 3.0, 1e-9);
  EXPECT_NEAR(s.dual[0], 5.0 / 3.0, 1e-9);
  EXPECT_NEAR(DualObjective(lp, s), 22.0 / 3.0, 1e-9);
}

TEST(Simplex, ObjectiveOffsetIsIncluded) {
  LinearProgram lp;
  lp.AddVariable(1.0, 2.0, 3.0);
  lp.set_objective_offset(-10.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, -7.0, 1e-12);
}

TEST(Simplex, DegenerateCyclingExample) {
  // Beale's example, which cycles under textbook Dantzig pivoting.
  LinearProgram lp;
  lp.AddVariable(0.0, kInf, -0.75);
  lp.AddVariable(0.0, kInf, 150.0);
  lp.AddVariable(0.0, kInf, -0.02);
  lp.AddVariable(0.0, kInf, 6.0);
  lp.AddConstraint({0, 1, 2, 3}, {0.25, -60.0, -0.04, 9.0}, RowSense::kLessEqual, 0.0);
  lp.AddConstraint({0, 1, 2, 3}, {0.5, -90.0, -0.02, 3.0}, RowSense::kLessEqual, 0.0);
  lp.AddConstraint({2}, {1.0}, RowSense::kLessEqual, 1.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, -0.05, 1e-9);
}

TEST(VertexEnumeration, UnitBox) {
  LinearProgram lp;
  lp.AddVariable(0.0, 1.0, 1.0);
  lp.AddVariable(0.0, 1.0, 1.0);
  const auto v = EnumerateVertices(lp);
  ASSERT_EQ(v.size(), 4u);
  const int best = BestVertex(lp, v);
  EXPECT_EQ(v[best].point, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(v[best].objective, 0.0);
}

TEST(VertexEnumeration, StandardSimplex) {
  LinearProgram lp;
  for (int j = 0; j < 3; ++j) lp.AddVariable(0.0, kInf, 0.0);
  lp.AddConstraint({0, 1, 2}, {1.0, 1.0, 1.0}, RowSense::kEqual, 1.0);
  EXPECT_EQ(EnumerateVertices(lp).size(), 3u);
}

TEST(VertexEnumeration, Guards) {
  LinearProgram big;
  for (int j = 0; j < 13; ++j) big.AddVariable(0.0, 1.0, 0.0);
  try {
    EnumerateVertices(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
  LinearProgram ray;
  ray.AddVariable(0.0, kInf, 0.0);
  ray.AddVariable(0.0, kInf, 0.0);
  ray.AddConstraint({0, 1}, {1.0, -1.0}, RowSense::kLessEqual, 1.0);
  try {
    EnumerateVertices(ray);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnboundedRegion);
  }
}

TEST(Simplex, FiveByFourMatchesVertexOracle) {
  Rng rng(20240611);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const LinearProgram lp = RandomBoundedLp(rng, 5, 4);
    const auto vertices = EnumerateVertices(lp);
    const LpSolution s = SolveLp(lp);
    if (vertices.empty()) {
      EXPECT_EQ(s.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_TRUE(s.optimal()) << "trial " << trial;
    const double oracle = vertices[BestVertex(lp, vertices)].objective;
    EXPECT_TRUE(Near(s.objective, oracle, 1e-6)) << s.objective << " vs " << oracle;
    ++checked;
  }
  EXPECT_GT(checked, 25);
}

// Strong duality, complementary slackness and feasibility on random programs
// of varying shape, including free and boxed columns.
TEST(Simplex, DualityProperties) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.UniformInt(1, 12));
    const int m = static_cast<int>(rng.UniformInt(1, 10));
    LinearProgram lp = RandomBoundedLp(rng, n, m);
    const LpSolution s = SolveLp(lp);
    if (!s.optimal()) continue;
    const double dual = DualObjective(lp, s);
    EXPECT_LE(std::abs(s.objective - dual), 1e-6 * (1.0 + std::abs(s.objective))) << trial;
    EXPECT_LE(lp.MaxViolation(s.primal), 1e-7) << trial;
    const auto act = lp.RowActivities(s.primal);
    for (int i = 0; i < lp.num_constraints(); ++i) {
      const double slack = act[i] - lp.constraint(i).rhs;
      EXPECT_LE(std::abs(s.dual[i] * slack), 1e-6) << trial << " row " << i;
    }
  }
}

TEST(Simplex, DeterministicBytes) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const LinearProgram lp = RandomBoundedLp(rng, 10, 8);
    const LpSolution a = SolveLp(lp);
    const LpSolution b = SolveLp(lp);
    ASSERT_EQ(a.status, b.status);
    ASSERT_EQ(a.primal.size(), b.primal.size());
    EXPECT_EQ(0, std::memcmp(a.primal.data(), b.primal.data(), a.primal.size() * sizeof(double)));
    EXPECT_EQ(0, std::memcmp(a.dual.data(), b.dual.data(), a.dual.size() * sizeof(double)));
  }
}

TEST(SimplexEngine, WarmStartAfterBoundChange) {
  Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    LinearProgram lp = RandomBoundedLp(rng, 8, 6);
    SimplexEngine engine(lp);
    if (!engine.Solve().optimal()) continue;
    const int j = static_cast<int>(rng.UniformInt(0, 7));
    engine.SetVariableBounds(j, 0.0, 0.5);
    const LpSolution warm = engine.Solve();
    lp.set_bounds(j, 0.0, std::min(0.5, lp.upper(j)));
    const LpSolution cold = SolveLp(lp);
    ASSERT_EQ(warm.status, cold.status);
    if (cold.optimal()) EXPECT_NEAR(warm.objective, cold.objective, 1e-7);
  }
}

TEST(SimplexEngine, SaveLoadBasisReproducesOptimum) {
  Rng rng(10);
  const LinearProgram lp = RandomBoundedLp(rng, 9, 7);
  SimplexEngine engine(lp);
  const LpSolution first = engine.Solve();
  const Basis basis = engine.SaveBasis();
  SimplexEngine other(lp);
  other.LoadBasis(basis);
  const LpSolution again = other.Solve();
  ASSERT_EQ(first.status, again.status);
  EXPECT_EQ(again.iterations, 0);
}

TEST(LpFormat, RoundTripIsExact) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    LinearProgram lp = RandomBoundedLp(rng, 6, 5);
    lp.set_cost(0, 0.1 + 1.0 / 3.0);
    lp.set_objective_offset(-2.5e-7);
    lp.set_bounds(1, -kInf, 7.25);
    const std::string text = ToLpFormat(lp, {0, 2});
    const ParsedLp parsed = ParseLpFormat(text);
    EXPECT_EQ(parsed.integers, (std::vector<int>{0, 2}));
    EXPECT_EQ(ToLpFormat(parsed.lp, parsed.integers), text);
    EXPECT_EQ(parsed.lp.costs(), lp.costs());
    EXPECT_EQ(parsed.lp.lowers(), lp.lowers());
    EXPECT_EQ(parsed.lp.uppers(), lp.uppers());
    EXPECT_EQ(parsed.lp.objective_offset(), lp.objective_offset());
    EXPECT_EQ(parsed.lp.sense(), lp.sense());
  }
}

TEST(LpFormat, ReportsLineOfError) {
  const std::string text = "minimize: 1*x\nbounds:\nx 0 1\nconstraints:\nc: 2*y <= 1\nend\n";
  try {
    ParseLpFormat(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
}

// Warm start where the row is violated by 5e-8 (inside the feasibility
// tolerance) with its logical basic, and the entering column pushes the row
// further out. The step must be 0, not a false ray.
TEST(SimplexEngine, BasicJustPastItsBoundBlocksDegenerately) {
  LinearProgram lp;
  lp.AddVariable(4.0 + 5e-8, 4.0 + 5e-8, -1.0);  // fixed
  lp.AddVariable(0.0, 0.0, -0.5);                // released below
  lp.AddConstraint({0, 1}, {1.0, 1.0}, RowSense::kEqual, 4.0);
  SimplexEngine engine(lp);
  const LpSolution first = engine.Solve();
  ASSERT_TRUE(first.optimal());
  engine.SetVariableBounds(1, 0.0, kInf);
  const LpSolution second = engine.Solve();
  ASSERT_EQ(second.status, LpStatus::kOptimal);
  EXPECT_NEAR(second.objective, -4.0, 1e-6);
}

}  // namespace
}  // namespace icsp::lp
