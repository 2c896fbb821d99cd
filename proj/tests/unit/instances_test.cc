#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "icsp/common/error.h"
#include "icsp/common/rng.h"
#include "icsp/instances/generators.h"
#include "icsp/instances/invp_exact.h"
#include "icsp/milp/branch_and_bound.h"
#include "icsp/spmodel/extensive_form.h"
#include "icsp/spmodel/io.h"
#include "icsp/spmodel/recourse.h"

namespace icsp::instances {
namespace {

using sp::ScenarioSet;
using sp::TwoStageProblem;

milp::MilpSolution SolveEf(const TwoStageProblem& p, const ScenarioSet& set) {
  milp::MilpConfig cfg;
  cfg.gap_tol = 0.0;
  return milp::SolveMilp(sp::BuildExtensiveForm(p, set), cfg);
}

TwoStageProblem Invp(InvpRecourse r, InvpTechnology t) { return GenInvp(r, t, 0); }

// INVP with T = E: the feasible second-stage set shrinks as x grows, so
// Q_s is a non-decreasing step function that is constant on the cells
// (a, b] between consecutive values xi_s,i - w_i'y. With c < 0 the optimum is
// at a right cell end, i.e. on the product of those breakpoints and the upper
// bound. The oracle enumerates every y per scenario at every candidate point.
double InvpIdentityOracle(const TwoStageProblem& p, const ScenarioSet& set) {
  const std::vector<double>& q = p.second.q;
  const int ub = static_cast<int>(p.second.upper[0]);
  const auto rows = p.second.W.RowLists();
  std::vector<std::array<double, 4>> w(2);
  for (int i = 0; i < 2; ++i) {
    w[i].fill(0.0);
    for (const Triplet& t : rows[i]) w[i][t.col] = t.value;
  }
  // All y in {0..ub}^4 with their cost and row loads.
  struct Pattern { double cost, load0, load1; };
  std::vector<Pattern> patterns;
  for (int a = 0; a <= ub; ++a)
    for (int b = 0; b <= ub; ++b)
      for (int c = 0; c <= ub; ++c)
        for (int d = 0; d <= ub; ++d) {
          const double y[4] = {double(a), double(b), double(c), double(d)};
          Pattern pt{0.0, 0.0, 0.0};
          for (int k = 0; k < 4; ++k) {
            pt.cost += q[k] * y[k];
            pt.load0 += w[0][k] * y[k];
            pt.load1 += w[1][k] * y[k];
          }
          patterns.push_back(pt);
        }
  std::vector<std::vector<double>> cand(2);
  for (int i = 0; i < 2; ++i) {
    std::set<double> c = {p.first.upper[i]};
    for (const sp::Scenario& s : set.scenarios) {
      for (const Pattern& pt : patterns) {
        const double v = s.h[i] - (i == 0 ? pt.load0 : pt.load1);
        if (v >= p.first.lower[i] && v <= p.first.upper[i]) c.insert(v);
      }
    }
    cand[i].assign(c.begin(), c.end());
  }
  double best = lp::kInf;
  for (double x0 : cand[0]) {
    for (double x1 : cand[1]) {
      double f = p.first.c[0] * x0 + p.first.c[1] * x1;
      for (const sp::Scenario& s : set.scenarios) {
        double qs = lp::kInf;
        for (const Pattern& pt : patterns) {
          if (pt.load0 <= s.h[0] - x0 + 1e-9 && pt.load1 <= s.h[1] - x1 + 1e-9) {
            qs = std::min(qs, pt.cost);
          }
        }
        f += s.probability * qs;
      }
      best = std::min(best, f);
    }
  }
  return best;
}

TEST(Generators, Names) {
  InstanceSpec spec;
  spec.family = Family::kSslp;
  spec.n = 5;
  spec.m = 25;
  EXPECT_EQ(InstanceName(spec), "SSLP_5_25");
  spec.family = Family::kInvp;
  spec.invp_technology = InvpTechnology::kHalves;
  EXPECT_EQ(InstanceName(spec), "INVP_B_H");
  EXPECT_EQ(ParseFamily("cflp"), Family::kCflp);
  EXPECT_THROW(ParseFamily("pooling"), Error);
}

TEST(Generators, DeterministicJson) {
  for (Family f : {Family::kCflp, Family::kSslp, Family::kInvp}) {
    InstanceSpec spec;
    spec.family = f;
    spec.seed = 7;
    const TwoStageProblem a = GenerateInstance(spec);
    const TwoStageProblem b = GenerateInstance(spec);
    EXPECT_EQ(sp::ToJson(a).dump(), sp::ToJson(b).dump());
    EXPECT_EQ(sp::ToJson(SampleScenarios(a, 20, 3)).dump(),
              sp::ToJson(SampleScenarios(b, 20, 3)).dump());
    EXPECT_NE(sp::ToJson(SampleScenarios(a, 20, 3)).dump(),
              sp::ToJson(SampleScenarios(a, 20, 4)).dump());
    if (f != Family::kInvp) {
      spec.seed = 8;
      EXPECT_NE(sp::ToJson(GenerateInstance(spec)).dump(), sp::ToJson(a).dump());
    }
  }
}

TEST(Generators, CflpLayout) {
  const TwoStageProblem p = GenCflp(10, 10, 7);
  EXPECT_EQ(p.n(), 10);
  EXPECT_EQ(static_cast<int>(p.first.integers.size()), 10);
  EXPECT_EQ(p.second.n_y(), 10 * 10 + 10);
  EXPECT_EQ(p.second.m_y(), 10 + 10);
  EXPECT_FALSE(p.has_integer_recourse());
  for (double u : p.first.upper) EXPECT_EQ(u, 1.0);
  // Scenario demands stay in [ceil(0.5 d), floor(1.5 d)].
  const auto base = p.metadata.at("demand").get<std::vector<double>>();
  for (const sp::Scenario& s : SampleScenarios(p, 50, 1).scenarios) {
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double d = s.features[j] * base[j];
      EXPECT_GE(d, std::ceil(0.5 * base[j]) - 1e-9);
      EXPECT_LE(d, std::floor(1.5 * base[j]) + 1e-9);
      EXPECT_NEAR(d, std::round(d), 1e-9);
    }
  }
}

TEST(Generators, SslpLayout) {
  const TwoStageProblem p = GenSslp(15, 45, 1);
  EXPECT_EQ(static_cast<int>(p.first.integers.size()), 15);
  EXPECT_EQ(p.second.n_y(), 15 * 45 + 15);
  EXPECT_EQ(static_cast<int>(p.second.integers.size()), 15 * 45);
  for (const sp::Scenario& s : SampleScenarios(p, 10, 2).scenarios) {
    ASSERT_EQ(static_cast<int>(s.features.size()), 45);
    for (int i = 0; i < 45; ++i) {
      EXPECT_TRUE(s.features[i] == 0.0 || s.features[i] == 1.0);
      EXPECT_EQ(s.features[i], s.h[i]);
    }
  }
}

TEST(Generators, InvpGrid) {
  const TwoStageProblem p = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  const ScenarioSet g = InvpGrid(p, 4);
  ASSERT_EQ(g.size(), 4);
  std::multiset<std::pair<double, double>> seen;
  for (const sp::Scenario& s : g.scenarios) {
    seen.insert({s.h[0], s.h[1]});
    EXPECT_DOUBLE_EQ(s.probability, 0.25);
  }
  const std::multiset<std::pair<double, double>> want = {{5, 5}, {5, 15}, {15, 5}, {15, 15}};
  EXPECT_EQ(seen, want);
  for (int s : {1, 9, 36, 100}) EXPECT_EQ(InvpGrid(p, s).size(), s);
  EXPECT_THROW(InvpGrid(p, 10), Error);
  EXPECT_THROW(InvpGrid(p, 0), Error);
}

TEST(Generators, InvpReferenceData) {
  const TwoStageProblem e = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  const TwoStageProblem h = Invp(InvpRecourse::kInteger, InvpTechnology::kHalves);
  EXPECT_EQ(e.first.c, (std::vector<double>{-1.5, -4.0}));
  EXPECT_EQ(e.second.q, (std::vector<double>{-16.0, -19.0, -23.0, -28.0}));
  EXPECT_EQ(e.first.upper, (std::vector<double>{5.0, 5.0}));
  EXPECT_EQ(e.second.upper[0], 1.0);
  EXPECT_EQ(h.second.upper[0], 5.0);
  EXPECT_NEAR(h.second.T.Multiply({3.0, 0.0})[0], 2.0, 1e-15);
  EXPECT_NEAR(h.second.T.Multiply({3.0, 0.0})[1], 1.0, 1e-15);
}

TEST(Generators, InvpAtOriginIsThePureSecondStage) {
  const TwoStageProblem p = Invp(InvpRecourse::kBinary, InvpTechnology::kHalves);
  for (const sp::Scenario& s : InvpGrid(p, 9).scenarios) {
    // Best binary pattern for W y <= xi by enumeration.
    double best = 0.0;
    const double w[2][4] = {{2, 3, 4, 5}, {6, 1, 3, 2}};
    const double q[4] = {-16, -19, -23, -28};
    for (int mask = 0; mask < 16; ++mask) {
      double l0 = 0, l1 = 0, c = 0;
      for (int k = 0; k < 4; ++k) {
        if (mask >> k & 1) {
          l0 += w[0][k];
          l1 += w[1][k];
          c += q[k];
        }
      }
      if (l0 <= s.h[0] && l1 <= s.h[1]) best = std::min(best, c);
    }
    EXPECT_NEAR(sp::EvaluateRecourse(p, {0.0, 0.0}, s), best, 1e-9);
  }
}

TEST(Generators, RelativelyCompleteRecourse) {
  for (Family f : {Family::kCflp, Family::kSslp, Family::kInvp}) {
    for (InvpRecourse r : {InvpRecourse::kBinary, InvpRecourse::kInteger}) {
      if (f != Family::kInvp && r == InvpRecourse::kInteger) continue;
      InstanceSpec spec;
      spec.family = f;
      spec.n = f == Family::kSslp ? 5 : 10;
      spec.m = f == Family::kSslp ? 25 : 10;
      spec.invp_recourse = r;
      spec.invp_technology = InvpTechnology::kHalves;
      spec.seed = 3;
      const TwoStageProblem p = GenerateInstance(spec);
      const ScenarioSet set = SampleScenarios(p, 100, 5);
      Rng rng(17);
      for (int t = 0; t < 100; ++t) {
        const std::vector<double> x = sp::SampleFirstStage(p, rng);
        for (const sp::Scenario& s : set.scenarios) {
          ASSERT_NO_THROW(sp::EvaluateRecourse(p, x, s)) << p.id;
        }
      }
    }
  }
}

TEST(Generators, SingleFacilityOpensIffItPays) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const TwoStageProblem p = GenCflp(1, 1, seed);
    const ScenarioSet set = SampleScenarios(p, 4, seed);
    const double cap = p.metadata.at("capacity")[0].get<double>();
    const double unit = p.metadata.at("unit_cost")[0][0].get<double>();
    const double fixed = p.first.c[0];
    const double base = p.metadata.at("demand")[0].get<double>();
    double open = fixed, closed = 0.0;
    for (const sp::Scenario& s : set.scenarios) {
      const double d = s.features[0] * base;
      ASSERT_GE(cap, d);
      open += s.probability * std::min(unit, 200.0) * d;
      closed += s.probability * 200.0 * d;
    }
    const milp::MilpSolution sol = SolveEf(p, set);
    ASSERT_EQ(sol.status, milp::MilpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, std::min(open, closed), 1e-6);
    EXPECT_EQ(sol.incumbent[0], open < closed ? 1.0 : 0.0) << seed;
  }
}

TEST(Generators, TinySslpMatchesEnumeration) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TwoStageProblem p = GenSslp(2, 2, seed);
    const ScenarioSet set = SampleScenarios(p, 2, seed);
    const double u = p.metadata.at("capacity").get<double>();
    const double penalty = p.metadata.at("overflow_penalty").get<double>();
    // Revenue d_ij is minus the assignment cost q at column i * n + j.
    double best = lp::kInf;
    for (int xm = 0; xm < 4; ++xm) {
      const double x[2] = {double(xm & 1), double(xm >> 1 & 1)};
      double total = p.first.c[0] * x[0] + p.first.c[1] * x[1];
      for (const sp::Scenario& s : set.scenarios) {
        double qs = lp::kInf;
        for (int a = 0; a < 4; ++a) {  // server of client 0 and of client 1
          const int srv[2] = {a & 1, a >> 1 & 1};
          double load[2] = {0, 0}, cost = 0;
          for (int i = 0; i < 2; ++i) {
            if (s.h[i] == 0.0) continue;
            const double d = -p.second.q[i * 2 + srv[i]];
            load[srv[i]] += d;
            cost -= d;
          }
          for (int j = 0; j < 2; ++j) cost += penalty * std::max(0.0, load[j] - u * x[j]);
          qs = std::min(qs, cost);
        }
        total += s.probability * qs;
      }
      best = std::min(best, total);
    }
    const milp::MilpSolution sol = SolveEf(p, set);
    ASSERT_EQ(sol.status, milp::MilpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, best, 1e-6) << seed;
  }
}

TEST(Generators, InvpEfMatchesBreakpointOracle) {
  for (InvpRecourse r : {InvpRecourse::kBinary, InvpRecourse::kInteger}) {
    const TwoStageProblem p = Invp(r, InvpTechnology::kIdentity);
    for (int s : {1, 4}) {
      const ScenarioSet set = InvpGrid(p, s);
      const milp::MilpSolution sol = SolveEf(p, set);
      ASSERT_EQ(sol.status, milp::MilpStatus::kOptimal);
      EXPECT_NEAR(sol.objective, InvpIdentityOracle(p, set), 1e-6) << p.id << " s=" << s;
    }
  }
}

// Extensive-form optima on the grid, to two decimals.
TEST(Generators, InvpFrozenExtensiveFormValues) {
  struct Case { InvpRecourse r; InvpTechnology t; int s; double value; };
  const Case cases[] = {
      {InvpRecourse::kBinary, InvpTechnology::kIdentity, 4, -57.00},
      {InvpRecourse::kBinary, InvpTechnology::kIdentity, 9, -59.33},
      {InvpRecourse::kBinary, InvpTechnology::kHalves, 4, -56.75},
      {InvpRecourse::kBinary, InvpTechnology::kHalves, 9, -59.56},
      {InvpRecourse::kInteger, InvpTechnology::kIdentity, 4, -63.50},
      {InvpRecourse::kInteger, InvpTechnology::kHalves, 4, -63.50},
  };
  for (const Case& c : cases) {
    const TwoStageProblem p = Invp(c.r, c.t);
    const milp::MilpSolution sol = SolveEf(p, InvpGrid(p, c.s));
    ASSERT_EQ(sol.status, milp::MilpStatus::kOptimal);
    EXPECT_NEAR(sol.objective, c.value, 0.005) << p.id << " s=" << c.s;
  }
  const TwoStageProblem be = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  EXPECT_NEAR(InvpIdentityOracle(be, InvpGrid(be, 36)), -61.22, 0.005);
  const TwoStageProblem ie = Invp(InvpRecourse::kInteger, InvpTechnology::kIdentity);
  EXPECT_NEAR(InvpIdentityOracle(ie, InvpGrid(ie, 9)), -66.56, 0.005);
}

TEST(InvpExact, MatchesBruteForceOracle) {
  for (InvpRecourse r : {InvpRecourse::kBinary, InvpRecourse::kInteger}) {
    const TwoStageProblem p = Invp(r, InvpTechnology::kIdentity);
    for (int s : {1, 4}) {
      const ScenarioSet set = InvpGrid(p, s);
      EXPECT_NEAR(SolveInvpExact(p, set).objective, InvpIdentityOracle(p, set), 1e-9)
          << p.id << " s=" << s;
    }
  }
  const TwoStageProblem be = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  for (std::uint64_t seed : {1, 2, 3}) {
    const ScenarioSet set = SampleScenarios(be, 12, seed);
    EXPECT_NEAR(SolveInvpExact(be, set).objective, InvpIdentityOracle(be, set), 1e-9);
  }
}

TEST(InvpExact, MatchesBranchAndBoundAndReEvaluation) {
  const TwoStageProblem p = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  for (std::uint64_t seed : {4, 5, 6, 7}) {
    const ScenarioSet set = SampleScenarios(p, 6, seed);
    const ExactSolution exact = SolveInvpExact(p, set);
    const milp::MilpSolution ef = SolveEf(p, set);
    ASSERT_EQ(ef.status, milp::MilpStatus::kOptimal);
    EXPECT_NEAR(exact.objective, ef.objective, 1e-6);
    const double again = p.first.c[0] * exact.x[0] + p.first.c[1] * exact.x[1] +
                         sp::ExpectedRecourse(p, exact.x, set);
    EXPECT_NEAR(again, exact.objective, 1e-9);
  }
}

TEST(InvpExact, PublishedGridBaselines) {
  const TwoStageProblem p = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  EXPECT_NEAR(SolveInvpExact(p, InvpGrid(p, 4)).objective, -57.00, 0.005);
  EXPECT_NEAR(SolveInvpExact(p, InvpGrid(p, 36)).objective, -61.22, 0.005);
  EXPECT_NEAR(SolveInvpExact(p, InvpGrid(p, 121)).objective, -62.29, 0.005);
}

TEST(InvpExact, RejectsOtherShapes) {
  const TwoStageProblem h = Invp(InvpRecourse::kBinary, InvpTechnology::kHalves);
  try {
    SolveInvpExact(h, InvpGrid(h, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidModel);
  }
  EXPECT_THROW(SolveInvpExact(GenCflp(3, 3, 1), SampleScenarios(GenCflp(3, 3, 1), 2, 1)), Error);
  const TwoStageProblem p = Invp(InvpRecourse::kBinary, InvpTechnology::kIdentity);
  try {
    SolveInvpExact(p, InvpGrid(p, 100), 1e3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

}  // namespace
}  // namespace icsp::instances
