#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icsp/embed/embedding.h"
#include "icsp/instances/generators.h"
#include "icsp/milp/branch_and_bound.h"
#include "icsp/nn/train.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::harness {

enum class Method { kEf, kIcnn, kNn };

std::string_view ToString(Method method);
Method ParseMethod(std::string_view name);

// 100 (method_true - baseline) / |baseline|. Throws Error(kBaselineZero).
double ComputeGap(double method_true, double baseline);

// c'x + expected recourse over `scenarios`. Integer components within 1e-6 of
// an integer are rounded first. Throws Error(kInfeasibleFirstStage) if an
// integer component is further away or a first-stage row or bound is
// violated by more than 1e-6.
double EvaluateTrueObjective(const sp::TwoStageProblem& problem, const std::vector<double>& x,
                             const sp::ScenarioSet& scenarios);

struct SolveReport {
  std::string instance;
  int n_scenarios = 0;
  Method method = Method::kEf;
  std::string status;
  double approx_objective = 0.0;  // objective of the program that was solved
  double true_objective = 0.0;    // x re-evaluated on the scenario set
  double bound = 0.0;             // proven bound of the solved program
  double gap_vs_baseline_pct = 0.0;  // against the EF optimum (reference_objective)
  double gap_vs_ef_bound_pct = 0.0;  // against the EF proven bound
  double wall_time_s = 0.0;       // solve only; excludes loading and encoding
  double ef_time_to_match_s = -1.0;  // first EF incumbent at least as good; -1 if never
  long nodes = 0;
  embed::SizeSummary size;
  std::vector<double> x;
  std::string model_path;
  std::uint64_t model_digest = 0;
  double reference_objective = 0.0;  // EF optimum used for gap_vs_baseline_pct
  std::string reference_source;      // "EF", "breakpoint grid", "enumeration", "EF incumbent"
};

nlohmann::json ToJson(const SolveReport& r);

// Solver settings shared by every method.
struct SolverSettings {
  double time_limit_s = 60.0;
  double gap_tol = 1e-6;
  double integrality_tol = 1e-6;
  int cut_rounds = 20;
  bool dive_until_incumbent = true;
  bool first_stage_priority = true;
  bool record_node_log = false;
};

milp::MilpConfig MakeMilpConfig(const SolverSettings& s, int n_columns,
                                const std::vector<int>& first_stage_columns);

struct EfResult {
  SolveReport report;
  milp::MilpSolution solution;
  double reference_objective = 0.0;
  std::string reference_source;
  double reference_time_s = 0.0;
};

EfResult SolveExtensiveFormReport(const sp::TwoStageProblem& problem,
                                  const sp::ScenarioSet& scenarios, const SolverSettings& settings);

// Encodes the scenario set, embeds the model and solves. Throws
// Error(kNoIncumbentAtLimit) if the solve stops without a first-stage point.
SolveReport SolveSurrogateReport(const sp::TwoStageProblem& problem,
                                 const sp::ScenarioSet& scenarios, const nn::SurrogateModel& model,
                                 const SolverSettings& settings);

// The EF optimum that gaps are measured against: the EF objective when the
// solve proved optimality, else an exact solve by enumeration where the
// problem allows one (the breakpoint grid for INVP-shaped problems, the
// integer first-stage box otherwise), else the EF incumbent.
void AttachReference(EfResult& ef, const sp::TwoStageProblem& problem,
                     const sp::ScenarioSet& scenarios, bool allow_enumeration = true);

// Fills the two gap columns of `r` from the EF result and, when the EF node
// log is present, the time at which the EF incumbent first matched r.
void AttachBaseline(SolveReport& r, const EfResult& ef);

struct TrainSettings {
  std::vector<int> hidden{64};
  int encoder_hidden1 = 64;
  int encoder_hidden2 = 32;
  int embed_dim = 16;
  nn::TrainConfig config;
  bool grid_search = false;
  nn::SearchGrid grid;
  bool use_preset = false;  // reference-search configuration for the instance
  std::optional<int> preset_epochs;
};

struct PipelineConfig {
  std::string output_dir = "icsp_run";
  std::uint64_t seed = 1;
  std::vector<instances::InstanceSpec> instances;
  std::vector<int> scenario_counts{4, 9, 25, 49, 100};
  std::vector<Method> methods{Method::kEf, Method::kIcnn, Method::kNn};
  int pool_size = 100;
  int n_samples = 1000;
  int max_scenarios = 30;
  bool relax_sampling = false;
  int data_workers = 1;
  TrainSettings train;
  SolverSettings solver;
  bool time_to_match = true;
  bool exact_reference = true;  // enumerate when the EF solve stops early
  bool write_programs = false;   // LP text of every solved program next to the scenarios
  bool verbose = false;  // progress lines on std::clog
};

// Throws Error(kParseError) naming the offending key.
PipelineConfig PipelineConfigFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const PipelineConfig& c);

// Evaluation scenarios for s: the sqrt(s) x sqrt(s) grid for INVP, else
// equal-probability samples keyed by (seed, s).
sp::ScenarioSet EvaluationScenarios(const sp::TwoStageProblem& problem, int s, std::uint64_t seed);

// gen -> data -> train -> embed -> solve -> evaluate for every instance and
// scenario count. Artifacts go under output_dir/<instance>/; reports.csv and
// reports.json under output_dir. Existing artifacts are regenerated. A
// failing stage raises Error(kStageFailed) with the stage and artifact path.
std::vector<SolveReport> RunPipeline(const PipelineConfig& config);
std::vector<SolveReport> RunPipeline(const std::string& config_file);

void WriteReportsCsv(std::ostream& out, const std::vector<SolveReport>& reports,
                     const PipelineConfig& config);
void WriteReports(const std::vector<SolveReport>& reports, const PipelineConfig& config);

std::string GitCommit();

// FNV-1a digest of a file's bytes; 0 if the file cannot be read.
std::uint64_t FileDigest(const std::string& path);

}  // namespace icsp::harness
