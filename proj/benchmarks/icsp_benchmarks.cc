#include <benchmark/benchmark.h>

#include <vector>

#include "icsp/common/rng.h"
#include "icsp/embed/embedding.h"
#include "icsp/harness/harness.h"
#include "icsp/instances/generators.h"
#include "icsp/instances/invp_exact.h"
#include "icsp/lp/simplex.h"
#include "icsp/milp/branch_and_bound.h"
#include "icsp/nn/model.h"
#include "icsp/nn/train.h"
#include "icsp/spmodel/extensive_form.h"

namespace {

using namespace icsp;

void BM_SimplexCflpEfRelaxation(benchmark::State& state) {
  const auto problem = instances::GenCflp(10, 10, 1);
  const auto scenarios = instances::SampleScenarios(problem, static_cast<int>(state.range(0)), 2);
  const auto lp = milp::LpRelaxation(sp::BuildExtensiveForm(problem, scenarios));
  for (auto _ : state) benchmark::DoNotOptimize(lp::SolveLp(lp).objective);
  state.counters["columns"] = lp.num_variables();
}
BENCHMARK(BM_SimplexCflpEfRelaxation)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_BranchAndBoundCflpEf(benchmark::State& state) {
  const auto problem = instances::GenCflp(5, 5, 1);
  const auto scenarios = instances::SampleScenarios(problem, static_cast<int>(state.range(0)), 2);
  const auto mip = sp::BuildExtensiveForm(problem, scenarios);
  harness::SolverSettings settings;
  std::vector<int> first(problem.n());
  for (int j = 0; j < problem.n(); ++j) first[j] = j;
  const auto cfg = harness::MakeMilpConfig(settings, mip.base().num_variables(), first);
  for (auto _ : state) benchmark::DoNotOptimize(milp::SolveMilp(mip, cfg).objective);
}
BENCHMARK(BM_BranchAndBoundCflpEf)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

// Embedded solve of an untrained surrogate of CFLP_10_10 at a given width.
void SurrogateSolve(benchmark::State& state, nn::Kind kind) {
  const auto problem = instances::GenCflp(10, 10, 1);
  const auto scenarios = instances::SampleScenarios(problem, 4, 2);
  Rng rng(3);
  const auto model = nn::InitModel({kind, {static_cast<int>(state.range(0))}, 32, 16, 8}, problem.n(),
                                   static_cast<int>(scenarios.scenarios.at(0).features.size()), rng);
  harness::SolverSettings settings;
  settings.time_limit_s = 30.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(harness::SolveSurrogateReport(problem, scenarios, model, settings).approx_objective);
  }
}
void BM_IcnnEmbeddedSolve(benchmark::State& state) { SurrogateSolve(state, nn::Kind::kIcnn); }
void BM_ReluEmbeddedSolve(benchmark::State& state) { SurrogateSolve(state, nn::Kind::kRelu); }
BENCHMARK(BM_IcnnEmbeddedSolve)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReluEmbeddedSolve)->RangeMultiplier(2)->Range(8, 64)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  Rng rng(4);
  nn::TrainingData data;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> f(4);
    for (double& v : f) v = rng.Uniform(-1, 1);
    data.pool_features.push_back(f);
  }
  for (int i = 0; i < 256; ++i) {
    nn::TrainingRecord r;
    r.x = {rng.Uniform(0, 1), rng.Uniform(0, 1), rng.Uniform(0, 1)};
    r.scenarios = rng.SampleWithoutReplacement(50, 1 + i % 10);
    r.label = r.x[0] * r.x[0] + r.x[1] - r.x[2];
    data.records.push_back(r);
  }
  const nn::Kind kind = state.range(0) ? nn::Kind::kRelu : nn::Kind::kIcnn;
  const auto model = nn::InitModel({kind, {64}, 32, 16, 8}, 3, 4, rng);
  nn::TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(nn::Train(model, data, cfg).val_mae);
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_InvpBreakpointGrid(benchmark::State& state) {
  const auto problem = instances::GenInvp(instances::InvpRecourse::kBinary, instances::InvpTechnology::kIdentity, 1);
  const auto scenarios = instances::InvpGrid(problem, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(instances::SolveInvpExact(problem, scenarios).objective);
}
BENCHMARK(BM_InvpBreakpointGrid)->Arg(4)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
