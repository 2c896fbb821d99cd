#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "icsp/common/error.h"
#include "icsp/harness/harness.h"
#include "icsp/instances/generators.h"
#include "icsp/instances/invp_exact.h"
#include "icsp/spmodel/extensive_form.h"
#include "icsp/spmodel/io.h"
#include "icsp/spmodel/recourse.h"

namespace icsp::harness {
namespace {

namespace fs = std::filesystem;

std::string TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p.string();
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Gap, WorkedExamples) {
  EXPECT_DOUBLE_EQ(ComputeGap(105.0, 100.0), 5.0);
  EXPECT_DOUBLE_EQ(ComputeGap(100.0, 100.0), 0.0);
  EXPECT_DOUBLE_EQ(ComputeGap(95.0, -100.0), 195.0);
  EXPECT_DOUBLE_EQ(ComputeGap(-90.0, -100.0), 10.0);
  try {
    ComputeGap(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBaselineZero);
  }
}

TEST(TrueObjective, MatchesTheExtensiveFormAtItsOptimum) {
  const auto p = instances::GenCflp(4, 4, 3);
  const auto set = instances::SampleScenarios(p, 5, 4);
  const auto sol = milp::SolveMilp(sp::BuildExtensiveForm(p, set));
  ASSERT_EQ(sol.status, milp::MilpStatus::kOptimal);
  const std::vector<double> x(sol.incumbent.begin(), sol.incumbent.begin() + p.n());
  EXPECT_NEAR(EvaluateTrueObjective(p, x, set), sol.objective, 1e-6 * std::abs(sol.objective));
}

TEST(TrueObjective, ClosedFormWithEverythingClosed) {
  // No facility open: every customer is short and pays penalty * demand.
  const auto p = instances::GenCflp(3, 4, 5);
  const double penalty = p.metadata.at("shortfall_penalty").get<double>();
  sp::ScenarioSet set;
  set.id = "two";
  set.problem_id = p.id;
  const std::vector<std::vector<double>> demands = {{3, 5, 7, 11}, {2, 4, 6, 8}};
  const double prob[] = {0.25, 0.75};
  double expected = 0.0;
  for (int s = 0; s < 2; ++s) {
    auto sc = instances::CflpScenario(p, demands[s]);
    sc.id = "d" + std::to_string(s);
    sc.probability = prob[s];
    set.scenarios.push_back(sc);
    for (double d : demands[s]) expected += prob[s] * penalty * d;
  }
  EXPECT_NEAR(EvaluateTrueObjective(p, std::vector<double>(3, 0.0), set), expected, 1e-9 * expected);
}

TEST(TrueObjective, SingleScenarioIsCostPlusRecourse) {
  const auto p = instances::GenSslp(3, 6, 6);
  const auto set = instances::SampleScenarios(p, 1, 7);
  const std::vector<double> x = {1.0, 0.0, 1.0};
  const double direct = p.first.c[0] + p.first.c[2] + sp::EvaluateRecourse(p, x, set.scenarios[0]);
  EXPECT_NEAR(EvaluateTrueObjective(p, x, set), direct, 1e-9);
}

TEST(TrueObjective, RoundsNearIntegersAndRejectsInfeasiblePoints) {
  const auto p = instances::GenSslp(3, 6, 8);
  const auto set = instances::SampleScenarios(p, 3, 9);
  EXPECT_EQ(EvaluateTrueObjective(p, {1.0 - 1e-8, 0.0, 1e-9}, set),
            EvaluateTrueObjective(p, {1.0, 0.0, 0.0}, set));
  for (const std::vector<double>& bad : std::vector<std::vector<double>>{{0.5, 0.0, 0.0},
                                                                        {2.0, 0.0, 0.0}}) {
    try {
      EvaluateTrueObjective(p, bad, set);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInfeasibleFirstStage);
    }
  }
  EXPECT_THROW(EvaluateTrueObjective(p, {1.0}, set), Error);
}

TEST(Reference, OptimalEfIsItsOwnReference) {
  const auto p = instances::GenInvp(instances::InvpRecourse::kBinary,
                                    instances::InvpTechnology::kIdentity, 1);
  auto ef = SolveExtensiveFormReport(p, instances::InvpGrid(p, 4), SolverSettings{});
  ASSERT_EQ(ef.solution.status, milp::MilpStatus::kOptimal);
  AttachReference(ef, p, instances::InvpGrid(p, 4));
  EXPECT_EQ(ef.reference_source, "EF");
  EXPECT_EQ(ef.reference_objective, ef.report.true_objective);
  AttachBaseline(ef.report, ef);
  EXPECT_EQ(ef.report.gap_vs_baseline_pct, 0.0);
}

TEST(Reference, StoppedEfFallsBackToEnumeration) {
  const auto invp = instances::GenInvp(instances::InvpRecourse::kBinary,
                                       instances::InvpTechnology::kIdentity, 1);
  const auto grid = instances::InvpGrid(invp, 16);
  EfResult ef;
  ef.solution.status = milp::MilpStatus::kTimeLimit;
  ef.report.true_objective = -1.0;
  AttachReference(ef, invp, grid);
  EXPECT_EQ(ef.reference_source, "breakpoint grid");
  EXPECT_EQ(ef.reference_objective, instances::SolveInvpExact(invp, grid).objective);

  const auto sslp = instances::GenSslp(3, 6, 10);
  const auto set = instances::SampleScenarios(sslp, 4, 11);
  AttachReference(ef, sslp, set);
  EXPECT_EQ(ef.reference_source, "enumeration");
  const auto exact = milp::SolveMilp(sp::BuildExtensiveForm(sslp, set));
  EXPECT_NEAR(ef.reference_objective, exact.objective, 1e-6 * std::abs(exact.objective));

  AttachReference(ef, sslp, set, false);
  EXPECT_EQ(ef.reference_source, "EF incumbent");
  EXPECT_EQ(ef.reference_objective, -1.0);
}

TEST(Config, JsonRoundTripAndErrors) {
  const auto j = nlohmann::json::parse(R"({
    "output_dir": "out", "seed": 7, "instances": ["CFLP_10_10", {"name": "INVP_B_E", "seed": 3}],
    "scenario_counts": [4, 9], "methods": ["EF", "ICNN"], "n_samples": 50,
    "train": {"hidden": [8, 8], "config": {"epochs": 3, "optimizer": "rmsprop"}},
    "solver": {"time_limit_s": 5}})");
  const auto c = PipelineConfigFromJson(j);
  EXPECT_EQ(c.instances.size(), 2u);
  EXPECT_EQ(c.instances[0].seed, 7u);
  EXPECT_EQ(c.instances[1].family, instances::Family::kInvp);
  EXPECT_EQ(c.instances[1].seed, 3u);
  EXPECT_EQ(c.methods.size(), 2u);
  EXPECT_EQ(c.train.hidden, (std::vector<int>{8, 8}));
  EXPECT_EQ(c.train.config.optimizer, nn::Optimizer::kRmsprop);
  EXPECT_EQ(c.solver.time_limit_s, 5.0);
  EXPECT_EQ(ToJson(PipelineConfigFromJson(ToJson(c))), ToJson(c));

  try {
    PipelineConfigFromJson(nlohmann::json::parse(R"({"pool_size": "many"})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("pool_size"), std::string::npos);
  }
  EXPECT_THROW(PipelineConfigFromJson(nlohmann::json::parse(R"({"instances": ["CFLP_x"]})")),
               Error);
  EXPECT_THROW(PipelineConfigFromJson(nlohmann::json::parse(R"({"methods": ["LP"]})")), Error);
}

TEST(Reports, CsvUsesFullPrecision) {
  SolveReport r;
  r.instance = "X";
  r.status = "Optimal";
  r.true_objective = 0.1;
  std::ostringstream out;
  WriteReportsCsv(out, {r}, PipelineConfig{});
  const std::string csv = out.str();
  EXPECT_NE(csv.find("0.10000000000000001"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Reports, FileDigestIsFnv1a) {
  const auto dir = TempDir("icsp_digest");
  fs::create_directories(dir);
  const auto a = (fs::path(dir) / "a").string(), e = (fs::path(dir) / "e").string();
  std::ofstream(a) << "a";
  std::ofstream{e};
  EXPECT_EQ(FileDigest(a), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(FileDigest(e), 0xcbf29ce484222325ULL);
  EXPECT_EQ(FileDigest((fs::path(dir) / "missing").string()), 0u);
  fs::remove_all(dir);
}

PipelineConfig SmallConfig(const std::string& dir) {
  PipelineConfig c;
  c.output_dir = dir;
  c.seed = 3;
  c.instances = {instances::ParseInstanceName("INVP_B_E")};
  c.scenario_counts = {4};
  c.pool_size = 20;
  c.n_samples = 60;
  c.max_scenarios = 5;
  c.train.hidden = {8};
  c.train.encoder_hidden1 = 8;
  c.train.encoder_hidden2 = 8;
  c.train.embed_dim = 4;
  c.train.config.epochs = 5;
  c.solver.time_limit_s = 30;
  return c;
}

TEST(Pipeline, ExtensiveFormOnlyToy) {
  auto c = SmallConfig(TempDir("icsp_pipe_ef"));
  c.instances = {instances::ParseInstanceName("CFLP_3_3")};
  c.scenario_counts = {2};
  c.methods = {Method::kEf};
  const auto reports = RunPipeline(c);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].status, "Optimal");
  EXPECT_EQ(reports[0].gap_vs_baseline_pct, 0.0);
  EXPECT_EQ(reports[0].reference_source, "EF");
  EXPECT_NEAR(reports[0].true_objective, reports[0].approx_objective,
              1e-5 * std::abs(reports[0].approx_objective));
  EXPECT_FALSE(fs::exists(fs::path(c.output_dir) / "CFLP_3_3" / "data.jsonl"));
  const std::string csv = ReadAll(fs::path(c.output_dir) / "reports.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  const auto j = sp::ReadJsonFile((fs::path(c.output_dir) / "reports.json").string());
  EXPECT_EQ(j.at("reports").size(), 1u);
  fs::remove_all(c.output_dir);
}

TEST(Pipeline, ThreeMethodsAreReproducible) {
  const auto a = SmallConfig(TempDir("icsp_pipe_a"));
  const auto b = SmallConfig(TempDir("icsp_pipe_b"));
  const auto ra = RunPipeline(a);
  const auto rb = RunPipeline(b);
  ASSERT_EQ(ra.size(), 3u);
  ASSERT_EQ(rb.size(), 3u);
  EXPECT_NEAR(ra[0].true_objective, -57.0, 1e-9);
  EXPECT_LT(ra[0].wall_time_s, 1.0);
  const auto problem = sp::LoadProblem((fs::path(a.output_dir) / "INVP_B_E" / "problem.json").string());
  const auto set = sp::LoadScenarioSet((fs::path(a.output_dir) / "INVP_B_E" / "scenarios_s4.json").string());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(ra[i].method, rb[i].method);
    EXPECT_EQ(ra[i].x, rb[i].x);
    EXPECT_EQ(ra[i].true_objective, rb[i].true_objective);
    EXPECT_EQ(ra[i].model_digest, rb[i].model_digest);
    EXPECT_TRUE(std::isfinite(ra[i].gap_vs_baseline_pct));
    EXPECT_GE(ra[i].gap_vs_baseline_pct, -1e-9);  // the EF optimum is a lower bound
    EXPECT_NEAR(EvaluateTrueObjective(problem, ra[i].x, set), ra[i].true_objective, 1e-5);
  }
  EXPECT_EQ(ra[1].size.method, "ICNN");
  EXPECT_EQ(ra[2].size.method, "NN");
  EXPECT_EQ(ra[2].size.aux_binary, 8);
  for (const char* f : {"problem.json", "pool.json", "data.jsonl", "model_icnn.json",
                        "model_nn.json", "scenarios_s4.json"}) {
    const auto pa = fs::path(a.output_dir) / "INVP_B_E" / f;
    const auto pb = fs::path(b.output_dir) / "INVP_B_E" / f;
    ASSERT_TRUE(fs::exists(pa)) << f;
    EXPECT_EQ(ReadAll(pa), ReadAll(pb)) << f;
  }
  fs::remove_all(a.output_dir);
  fs::remove_all(b.output_dir);
}

TEST(Pipeline, StageFailuresNameTheStage) {
  auto c = SmallConfig(TempDir("icsp_pipe_fail"));
  c.methods = {Method::kIcnn};
  c.train.config.learning_rate = -1.0;
  try {
    RunPipeline(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStageFailed);
    EXPECT_NE(std::string(e.what()).find("stage 'train'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("model_icnn.json"), std::string::npos);
  }
  fs::remove_all(c.output_dir);
}

}  // namespace
}  // namespace icsp::harness
