#include <gtest/gtest.h>

#include <cmath>

#include "icsp/common/error.h"
#include "icsp/embed/embedding.h"
#include "icsp/instances/generators.h"
#include "icsp/lp/lp_format.h"
#include "icsp/lp/simplex.h"
#include "icsp/milp/branch_and_bound.h"
#include "icsp/nn/train.h"
#include "test_support.h"

namespace icsp::embed {
namespace {

using testing::RandomIcnn;
using testing::RandomRelu;
using testing::RandomVector;

// Box first stage with random costs, no rows.
sp::FirstStage Box(Rng& rng, int n, double lo, double hi) {
  sp::FirstStage f;
  f.c = RandomVector(rng, n, -1, 1);
  f.lower.assign(n, lo);
  f.upper.assign(n, hi);
  f.A = SparseMatrix(0, n);
  return f;
}

// Adds x_j = value_j rows.
sp::FirstStage Fixed(sp::FirstStage f, const std::vector<double>& x) {
  const int n = f.n();
  std::vector<Triplet> eye;
  for (int j = 0; j < n; ++j) eye.push_back({j, j, 1.0});
  f.A = SparseMatrix(n, n, eye);
  f.b = x;
  f.sense.assign(n, lp::RowSense::kEqual);
  return f;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

milp::MilpSolution Solve(const EmbeddedModel& m) {
  milp::MilpConfig cfg;
  cfg.gap_tol = 0.0;
  return milp::SolveMilp(m.program, cfg);
}

TEST(IcnnLp, FixedInputReproducesFeedforward) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4, e = trial % 3;
    std::vector<int> hidden;
    for (int k = 0; k < 1 + trial % 3; ++k) hidden.push_back(static_cast<int>(rng.UniformInt(1, 12)));
    const nn::IcnnParams p = RandomIcnn(rng, n + e, hidden);
    const auto x = RandomVector(rng, n, -2, 2), xi = RandomVector(rng, e, -1, 1);
    const sp::FirstStage f = Fixed(Box(rng, n, -2, 2), x);
    const EmbeddedModel m = EmbedIcnnLp(p, xi, f);
    const lp::LpSolution s = lp::SolveLp(m.program.base());
    ASSERT_TRUE(s.optimal());
    EXPECT_NEAR(s.objective - Dot(f.c, x), nn::ForwardIcnn(p, x, xi), 1e-6);
    EXPECT_EQ(m.program.num_integer(), 0);
  }
}

TEST(IcnnLp, ZeroNetworkAddsNothing) {
  Rng rng(2);
  nn::IcnnParams p = nn::InitIcnn(5, {4, 3}, rng);
  for (auto& w : p.W) std::fill(w.data.begin(), w.data.end(), 0.0);
  for (auto& s : p.S) std::fill(s.data.begin(), s.data.end(), 0.0);
  const sp::FirstStage f = Box(rng, 3, 0, 1);
  double plain = 0.0;
  for (double c : f.c) plain += std::min(c, 0.0);
  const lp::LpSolution s = lp::SolveLp(EmbedIcnnLp(p, std::vector<double>{0.3, 0.7}, f).program.base());
  ASSERT_TRUE(s.optimal());
  EXPECT_NEAR(s.objective, plain, 1e-12);
}

TEST(IcnnLp, RejectsNegativeHiddenWeights) {
  Rng rng(3);
  nn::IcnnParams p = RandomIcnn(rng, 2, {3, 3});
  p.W[1](0, 0) = -1e-9;
  try {
    EmbedIcnnLp(p, std::vector<double>{}, Box(rng, 2, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonNegativityViolated);
  }
  p.W[1](0, 0) = -1e-13;  // inside tolerance
  EXPECT_NO_THROW(EmbedIcnnLp(p, std::vector<double>{}, Box(rng, 2, 0, 1)));
  EXPECT_THROW(EmbedIcnnLp(p, std::vector<double>{1.0}, Box(rng, 2, 0, 1)), Error);
}

TEST(ReluMip, FixedInputReproducesFeedforward) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3, e = trial % 2;
    std::vector<int> hidden{static_cast<int>(rng.UniformInt(1, 8))};
    if (trial % 2) hidden.push_back(static_cast<int>(rng.UniformInt(1, 8)));
    const nn::ReluNetParams p = RandomRelu(rng, n + e, hidden);
    const auto x = RandomVector(rng, n, -1, 1), xi = RandomVector(rng, e, -1, 1);
    const sp::FirstStage f = Fixed(Box(rng, n, -1, 1), x);
    const EmbeddedModel m = EmbedReluMip(p, xi, f);
    const milp::MilpSolution s = Solve(m);
    ASSERT_EQ(s.status, milp::MilpStatus::kOptimal);
    EXPECT_NEAR(s.objective - Dot(f.c, x), nn::ForwardRelu(p, x, xi), 1e-6);
    EXPECT_EQ(m.program.num_binary(), p.hidden_neurons());
  }
}

TEST(ReluMip, ZeroNetworkAddsNothing) {
  Rng rng(5);
  nn::ReluNetParams p = nn::InitRelu(3, {4}, rng);
  for (auto& w : p.W) std::fill(w.data.begin(), w.data.end(), 0.0);
  const sp::FirstStage f = Box(rng, 3, 0, 1);
  double plain = 0.0;
  for (double c : f.c) plain += std::min(c, 0.0);
  const milp::MilpSolution s = Solve(EmbedReluMip(p, std::vector<double>{}, f));
  ASSERT_EQ(s.status, milp::MilpStatus::kOptimal);
  EXPECT_NEAR(s.objective, plain, 1e-12);
}

TEST(ReluMip, RejectsUnboundedInput) {
  Rng rng(6);
  const nn::ReluNetParams p = RandomRelu(rng, 2, {3});
  sp::FirstStage f = Box(rng, 2, 0, 1);
  f.upper[1] = lp::kInf;
  try {
    EmbedReluMip(p, std::vector<double>{}, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnboundedInput);
  }
}

TEST(Bounds, IdentityAndNegatedIdentity) {
  nn::ReluNetParams p;
  p.dims = {1, 1, 1};
  p.W = {nn::Matrix(1, 1), nn::Matrix(1, 1)};
  p.W[0](0, 0) = 1.0;
  p.W[1](0, 0) = 1.0;
  p.b = {{0.0}, {0.0}};
  NetworkBounds b = PropagateBounds(p, {{0.0, 1.0}});
  EXPECT_EQ(b.pre[0][0].lower, 0.0);
  EXPECT_EQ(b.pre[0][0].upper, 1.0);
  p.W[0](0, 0) = -1.0;
  b = PropagateBounds(p, {{0.0, 1.0}});
  EXPECT_EQ(b.pre[0][0].lower, -1.0);
  EXPECT_EQ(b.pre[0][0].upper, 0.0);
  EXPECT_EQ(b.post[0][0].lower, 0.0);
  EXPECT_EQ(b.post[0][0].upper, 0.0);
  const Interval m = BigM(b.pre[0][0]);
  EXPECT_EQ(m.lower, -1.0);
  EXPECT_EQ(m.upper, 1e-6);
  EXPECT_THROW(PropagateBounds(p, {{0.0, lp::kInf}}), Error);
}

TEST(Bounds, SampledActivationsStayInside) {
  Rng rng(7);
  for (int net = 0; net < 5; ++net) {
    const nn::ReluNetParams p = RandomRelu(rng, 3, {6, 5});
    std::vector<Interval> box;
    for (int j = 0; j < 3; ++j) {
      const double lo = rng.Uniform(-2, 1);
      box.push_back({lo, lo + rng.Uniform(0, 2)});
    }
    const NetworkBounds b = PropagateBounds(p, box);
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> z(3);
      for (int j = 0; j < 3; ++j) z[j] = rng.Uniform(box[j].lower, box[j].upper);
      for (int l = 0; l < 2; ++l) {
        std::vector<double> next = p.b[l];
        for (int i = 0; i < p.dims[l + 1]; ++i) {
          for (int j = 0; j < p.dims[l]; ++j) next[i] += p.W[l](i, j) * z[j];
          const double slack = 1e-12 * (1.0 + std::abs(next[i]));
          ASSERT_GE(next[i], b.pre[l][i].lower - slack);
          ASSERT_LE(next[i], b.pre[l][i].upper + slack);
          next[i] = std::max(next[i], 0.0);
          ASSERT_LE(next[i], b.post[l][i].upper + slack);
        }
        z = next;
      }
    }
  }
}

TEST(Sizes, ReferenceCountsAtHiddenWidth512) {
  const auto problem = instances::GenCflp(10, 10, 1);
  nn::Preset icnn_preset, relu_preset;
  ASSERT_TRUE(nn::FindPreset("CFLP_10_10", nn::Kind::kIcnn, icnn_preset));
  ASSERT_TRUE(nn::FindPreset("CFLP_10_10", nn::Kind::kRelu, relu_preset));
  Rng rng(8);
  const auto icnn = nn::InitModel(icnn_preset.architecture, 10, 10, rng);
  const auto relu = nn::InitModel(relu_preset.architecture, 10, 10, rng);
  const std::vector<double> xi(icnn_preset.architecture.embed_dim, 0.1);

  const SizeSummary a = CountVariables(EmbedSurrogate(icnn, xi, problem.first));
  EXPECT_EQ(a.n_continuous, 513);
  EXPECT_EQ(a.n_integer, 10);
  EXPECT_EQ(a.aux_continuous, 513);
  EXPECT_EQ(a.aux_binary, 0);

  const SizeSummary b = CountVariables(EmbedSurrogate(relu, xi, problem.first));
  EXPECT_EQ(b.n_continuous, 1025);
  EXPECT_EQ(b.n_integer, 522);
  EXPECT_EQ(b.aux_continuous, 1025);
  EXPECT_EQ(b.aux_binary, 512);
  EXPECT_EQ(b.aux_continuous, 2 * (a.aux_continuous - 1) + 1);

  const auto j = ToJson(b);
  EXPECT_EQ(j["continuous"], 1025);
  EXPECT_EQ(j["integer"], 522);
}

TEST(Sizes, NoHiddenLayerAddsOnlyTheOutput) {
  Rng rng(9);
  const sp::FirstStage f = Box(rng, 3, 0, 1);
  const SizeSummary a = CountVariables(EmbedIcnnLp(nn::InitIcnn(3, {}, rng), std::vector<double>{}, f));
  const SizeSummary b = CountVariables(EmbedReluMip(nn::InitRelu(3, {}, rng), std::vector<double>{}, f));
  EXPECT_EQ(a.aux_continuous, 1);
  EXPECT_EQ(b.aux_continuous, 1);
  EXPECT_EQ(a.aux_binary + b.aux_binary, 0);
}

TEST(Sizes, ParityIdentityOnRandomArchitectures) {
  Rng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> hidden;
    const int layers = static_cast<int>(rng.UniformInt(0, 3));
    for (int k = 0; k < layers; ++k) hidden.push_back(static_cast<int>(rng.UniformInt(1, 20)));
    const int n = static_cast<int>(rng.UniformInt(1, 5));
    sp::FirstStage f = Box(rng, n, 0, 1);
    if (trial % 2) f.integers = {0};
    const auto xi = RandomVector(rng, 2, -1, 1);
    const SizeSummary a = CountVariables(EmbedIcnnLp(RandomIcnn(rng, n + 2, hidden), xi, f));
    const SizeSummary b = CountVariables(EmbedReluMip(RandomRelu(rng, n + 2, hidden), xi, f));
    EXPECT_EQ(b.aux_continuous, 2 * (a.aux_continuous - 1) + 1);
    EXPECT_EQ(a.aux_binary, 0);
    EXPECT_EQ(b.aux_binary, b.hidden_neurons);
    EXPECT_EQ(a.n_integer, static_cast<int>(f.integers.size()));
    EXPECT_EQ(b.n_integer, b.hidden_neurons + static_cast<int>(f.integers.size()));
  }
}

TEST(Objective, SolutionReproducesSurrogateObjective) {
  Rng rng(11);
  const auto problem = instances::GenCflp(4, 5, 12);
  for (nn::Kind kind : {nn::Kind::kIcnn, nn::Kind::kRelu}) {
    for (int trial = 0; trial < 5; ++trial) {
      nn::SurrogateModel model = nn::InitModel({kind, {6}, 4, 4, 3}, 4, 5, rng);
      model.target_mean = rng.Uniform(-50, 50);
      model.target_std = rng.Uniform(1, 100);
      const auto xi = RandomVector(rng, 3, -1, 1);
      const EmbeddedModel m = EmbedSurrogate(model, xi, problem.first);
      const milp::MilpSolution s = Solve(m);
      ASSERT_EQ(s.status, milp::MilpStatus::kOptimal);
      const auto x = ExtractX(m, s.incumbent);
      const double expect = Dot(problem.first.c, x) + nn::Predict(model, x, xi);
      EXPECT_NEAR(s.objective, expect, 1e-5 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(Objective, LpTextRoundTrips) {
  Rng rng(13);
  const auto problem = instances::GenCflp(3, 3, 14);
  const nn::SurrogateModel model = nn::InitModel({nn::Kind::kRelu, {4}, 3, 3, 2}, 3, 3, rng);
  const EmbeddedModel m = EmbedSurrogate(model, std::vector<double>{0.2, -0.4}, problem.first);
  const lp::ParsedLp back = lp::ParseLpFormat(ToLpText(m));
  EXPECT_EQ(back.lp.num_variables(), m.program.base().num_variables());
  EXPECT_EQ(back.lp.num_constraints(), m.program.base().num_constraints());
  EXPECT_EQ(back.integers, m.program.integer_vars());
}

}  // namespace
}  // namespace icsp::embed
