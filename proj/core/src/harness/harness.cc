#include "icsp/harness/harness.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "icsp/common/error.h"
#include "icsp/common/rng.h"
#include "icsp/common/stopwatch.h"
#include "icsp/datagen/dataset.h"
#include "icsp/instances/invp_exact.h"
#include "icsp/lp/lp_format.h"
#include "icsp/spmodel/extensive_form.h"
#include "icsp/spmodel/io.h"
#include "icsp/spmodel/recourse.h"

#ifndef ICSP_GIT_COMMIT
#define ICSP_GIT_COMMIT "unknown"
#endif

namespace icsp::harness {

namespace fs = std::filesystem;

std::string_view ToString(Method method) {
  switch (method) {
    case Method::kEf: return "EF";
    case Method::kIcnn: return "ICNN";
    case Method::kNn: return "NN";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  if (name == "EF" || name == "ef") return Method::kEf;
  if (name == "ICNN" || name == "icnn") return Method::kIcnn;
  if (name == "NN" || name == "nn" || name == "relu" || name == "ReLU") return Method::kNn;
  Fail(ErrorCode::kParseError, "unknown method '" + std::string(name) + "'");
}

double ComputeGap(double method_true, double baseline) {
  if (std::abs(baseline) < 1e-12) {
    Fail(ErrorCode::kBaselineZero, "gap undefined: baseline objective is zero");
  }
  return 100.0 * (method_true - baseline) / std::abs(baseline);
}

double EvaluateTrueObjective(const sp::TwoStageProblem& problem, const std::vector<double>& x,
                             const sp::ScenarioSet& scenarios) {
  if (static_cast<int>(x.size()) != problem.n()) {
    Fail(ErrorCode::kDimensionMismatch, "first-stage point has " + std::to_string(x.size()) +
                                            " entries, problem has " +
                                            std::to_string(problem.n()));
  }
  std::vector<double> xr = x;
  for (int j : problem.first.integers) {
    const double r = std::round(xr[j]);
    if (std::abs(xr[j] - r) > 1e-6) {
      Fail(ErrorCode::kInfeasibleFirstStage,
           "x[" + std::to_string(j) + "] = " + std::to_string(xr[j]) + " is not integral");
    }
    xr[j] = r;
  }
  const double violation = sp::FirstStageViolation(problem, xr, true);
  if (violation > 1e-6) {
    Fail(ErrorCode::kInfeasibleFirstStage,
         "first-stage point violates a row or bound by " + std::to_string(violation));
  }
  double value = 0.0;
  for (int j = 0; j < problem.n(); ++j) value += problem.first.c[j] * xr[j];
  return value + sp::ExpectedRecourse(problem, xr, scenarios);
}

namespace {

nlohmann::json Num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

std::string Hex(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

embed::SizeSummary ProgramSize(const milp::MixedIntegerProgram& mip, const sp::TwoStageProblem& p) {
  embed::SizeSummary s;
  s.method = "EF";
  const int cols = mip.base().num_variables();
  s.n_integer = mip.num_integer();
  s.n_binary = mip.num_binary();
  s.n_continuous = cols - s.n_integer;
  s.n_rows = mip.base().num_constraints();
  s.first_stage_integer = static_cast<int>(p.first.integers.size());
  return s;
}

}  // namespace

nlohmann::json ToJson(const SolveReport& r) {
  return {{"instance", r.instance},
          {"n_scenarios", r.n_scenarios},
          {"method", ToString(r.method)},
          {"status", r.status},
          {"approx_objective", Num(r.approx_objective)},
          {"true_objective", Num(r.true_objective)},
          {"bound", Num(r.bound)},
          {"gap_vs_baseline_pct", Num(r.gap_vs_baseline_pct)},
          {"gap_vs_ef_bound_pct", Num(r.gap_vs_ef_bound_pct)},
          {"wall_time_s", r.wall_time_s},
          {"ef_time_to_match_s", r.ef_time_to_match_s},
          {"nodes", r.nodes},
          {"size", embed::ToJson(r.size)},
          {"x", r.x},
          {"model_path", r.model_path},
          {"model_digest", Hex(r.model_digest)},
          {"reference_objective", Num(r.reference_objective)},
          {"reference_source", r.reference_source}};
}

milp::MilpConfig MakeMilpConfig(const SolverSettings& s, int n_columns,
                                const std::vector<int>& first_stage_columns) {
  milp::MilpConfig c;
  c.time_limit_s = s.time_limit_s;
  c.gap_tol = s.gap_tol;
  c.integrality_tol = s.integrality_tol;
  c.cut_rounds = s.cut_rounds;
  c.dive_until_incumbent = s.dive_until_incumbent;
  c.record_node_log = s.record_node_log;
  c.throw_without_incumbent = false;
  if (s.first_stage_priority) {
    c.branch_priority.assign(n_columns, 0);
    for (int j : first_stage_columns) c.branch_priority.at(j) = 1;
  }
  return c;
}

EfResult SolveExtensiveFormReport(const sp::TwoStageProblem& problem,
                                  const sp::ScenarioSet& scenarios, const SolverSettings& settings) {
  const auto mip = sp::BuildExtensiveForm(problem, scenarios);
  std::vector<int> first(problem.n());
  for (int j = 0; j < problem.n(); ++j) first[j] = j;
  const auto config = MakeMilpConfig(settings, mip.base().num_variables(), first);

  EfResult out;
  SolveReport& r = out.report;
  r.instance = problem.id;
  r.n_scenarios = scenarios.size();
  r.method = Method::kEf;
  r.size = ProgramSize(mip, problem);
  Stopwatch clock;
  out.solution = milp::SolveMilp(mip, config);
  r.wall_time_s = clock.ElapsedSeconds();
  const auto& sol = out.solution;
  r.status = std::string(milp::ToString(sol.status));
  r.bound = sol.bound;
  r.nodes = sol.node_count;
  r.approx_objective = sol.objective;
  r.true_objective = std::numeric_limits<double>::quiet_NaN();
  if (sol.has_incumbent()) {
    r.x.assign(sol.incumbent.begin(), sol.incumbent.begin() + problem.n());
    r.true_objective = EvaluateTrueObjective(problem, r.x, scenarios);
    for (int j : problem.first.integers) r.x[j] = std::round(r.x[j]);
  } else {
    r.status = "NoIncumbent";
  }
  return out;
}

SolveReport SolveSurrogateReport(const sp::TwoStageProblem& problem,
                                 const sp::ScenarioSet& scenarios, const nn::SurrogateModel& model,
                                 const SolverSettings& settings) {
  const auto xi = nn::EncodeScenarios(model.encoder, scenarios);
  const auto embedded = embed::EmbedSurrogate(model, xi, problem.first);
  const auto config =
      MakeMilpConfig(settings, embedded.program.base().num_variables(), embedded.x_indices);

  SolveReport r;
  r.instance = problem.id;
  r.n_scenarios = scenarios.size();
  r.method = model.kind == nn::Kind::kIcnn ? Method::kIcnn : Method::kNn;
  r.size = embedded.size;
  Stopwatch clock;
  const auto sol = milp::SolveMilp(embedded.program, config);
  r.wall_time_s = clock.ElapsedSeconds();
  if (!sol.has_incumbent()) {
    Fail(ErrorCode::kNoIncumbentAtLimit,
         std::string(ToString(r.method)) + " surrogate of " + problem.id + " with " +
             std::to_string(r.n_scenarios) + " scenarios stopped without an incumbent");
  }
  r.status = std::string(milp::ToString(sol.status));
  r.approx_objective = sol.objective;
  r.bound = sol.bound;
  r.nodes = sol.node_count;
  r.x = embed::ExtractX(embedded, sol.incumbent);
  r.true_objective = EvaluateTrueObjective(problem, r.x, scenarios);
  for (int j : problem.first.integers) r.x[j] = std::round(r.x[j]);
  return r;
}

void AttachReference(EfResult& ef, const sp::TwoStageProblem& problem,
                     const sp::ScenarioSet& scenarios, bool allow_enumeration) {
  ef.reference_objective = ef.report.true_objective;
  ef.reference_source = "EF incumbent";
  ef.reference_time_s = 0.0;
  if (ef.solution.status == milp::MilpStatus::kOptimal) {
    ef.reference_source = "EF";
    return;
  }
  if (!allow_enumeration) return;
  Stopwatch clock;
  try {
    if (problem.family == "INVP") {
      ef.reference_objective = instances::SolveInvpExact(problem, scenarios).objective;
      ef.reference_source = "breakpoint grid";
    } else {
      ef.reference_objective = sp::SolveByFirstStageEnumeration(problem, scenarios).objective;
      ef.reference_source = "enumeration";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidModel && e.code() != ErrorCode::kTooLarge) throw;
  }
  ef.reference_time_s = clock.ElapsedSeconds();
}

void AttachBaseline(SolveReport& r, const EfResult& ef) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.gap_vs_baseline_pct = nan;
  r.gap_vs_ef_bound_pct = nan;
  const bool have_reference = !ef.reference_source.empty();
  r.reference_objective = have_reference ? ef.reference_objective : ef.report.true_objective;
  r.reference_source = have_reference ? ef.reference_source : "EF incumbent";
  if (!std::isfinite(r.true_objective)) return;
  if (std::isfinite(r.reference_objective)) {
    r.gap_vs_baseline_pct = ComputeGap(r.true_objective, r.reference_objective);
  }
  if (std::isfinite(ef.report.bound)) {
    r.gap_vs_ef_bound_pct = ComputeGap(r.true_objective, ef.report.bound);
  }
  r.ef_time_to_match_s = -1.0;
  if (!ef.solution.node_log.empty()) {
    const double t = milp::TimeToReach(ef.solution.node_log, r.true_objective, false);
    if (std::isfinite(t)) r.ef_time_to_match_s = t;
  }
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

template <typename T>
T Get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("config key '") + key + "': " + e.what());
  }
}

nlohmann::json SpecToJson(const instances::InstanceSpec& s) {
  return {{"name", instances::InstanceName(s)}, {"seed", s.seed}};
}

instances::InstanceSpec SpecFromJson(const nlohmann::json& j, std::uint64_t seed) {
  try {
    if (j.is_string()) {
      auto spec = instances::ParseInstanceName(j.get<std::string>());
      spec.seed = seed;
      return spec;
    }
    auto spec = instances::ParseInstanceName(j.at("name").get<std::string>());
    spec.seed = Get<std::uint64_t>(j, "seed", seed);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("config key 'instances': ") + e.what());
  }
}

nlohmann::json TrainConfigToJson(const nn::TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"l1_penalty", c.l1_penalty},
          {"l2_penalty", c.l2_penalty},
          {"optimizer", nn::ToString(c.optimizer)},
          {"seed", c.seed},
          {"dropout_rate", c.dropout_rate},
          {"validation_fraction", c.validation_fraction}};
}

nn::TrainConfig TrainConfigFromJson(const nlohmann::json& j) {
  nn::TrainConfig c;
  c.epochs = Get(j, "epochs", c.epochs);
  c.batch_size = Get(j, "batch_size", c.batch_size);
  c.learning_rate = Get(j, "learning_rate", c.learning_rate);
  c.l1_penalty = Get(j, "l1_penalty", c.l1_penalty);
  c.l2_penalty = Get(j, "l2_penalty", c.l2_penalty);
  c.optimizer = nn::ParseOptimizer(Get<std::string>(j, "optimizer", "adam"));
  c.seed = Get(j, "seed", c.seed);
  c.dropout_rate = Get(j, "dropout_rate", c.dropout_rate);
  c.validation_fraction = Get(j, "validation_fraction", c.validation_fraction);
  return c;
}

}  // namespace

PipelineConfig PipelineConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kParseError, "pipeline config must be a JSON object");
  PipelineConfig c;
  c.output_dir = Get(j, "output_dir", c.output_dir);
  c.seed = Get(j, "seed", c.seed);
  if (j.contains("instances")) {
    if (!j.at("instances").is_array()) {
      Fail(ErrorCode::kParseError, "config key 'instances': expected an array");
    }
    for (const auto& item : j.at("instances")) c.instances.push_back(SpecFromJson(item, c.seed));
  }
  c.scenario_counts = Get(j, "scenario_counts", c.scenario_counts);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : Get<std::vector<std::string>>(j, "methods", {})) {
      c.methods.push_back(ParseMethod(m));
    }
  }
  c.pool_size = Get(j, "pool_size", c.pool_size);
  c.n_samples = Get(j, "n_samples", c.n_samples);
  c.max_scenarios = Get(j, "max_scenarios", c.max_scenarios);
  c.relax_sampling = Get(j, "relax_sampling", c.relax_sampling);
  c.data_workers = Get(j, "data_workers", c.data_workers);
  c.time_to_match = Get(j, "time_to_match", c.time_to_match);
  c.exact_reference = Get(j, "exact_reference", c.exact_reference);
  c.write_programs = Get(j, "write_programs", c.write_programs);
  c.verbose = Get(j, "verbose", c.verbose);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    c.train.hidden = Get(t, "hidden", c.train.hidden);
    c.train.encoder_hidden1 = Get(t, "encoder_hidden1", c.train.encoder_hidden1);
    c.train.encoder_hidden2 = Get(t, "encoder_hidden2", c.train.encoder_hidden2);
    c.train.embed_dim = Get(t, "embed_dim", c.train.embed_dim);
    c.train.grid_search = Get(t, "grid_search", c.train.grid_search);
    c.train.use_preset = Get(t, "use_preset", c.train.use_preset);
    if (t.contains("preset_epochs") && !t.at("preset_epochs").is_null()) {
      c.train.preset_epochs = Get<int>(t, "preset_epochs", 0);
    }
    if (t.contains("config")) c.train.config = TrainConfigFromJson(t.at("config"));
    if (t.contains("grid")) {
      const auto& g = t.at("grid");
      c.train.grid.hidden = Get(g, "hidden", c.train.grid.hidden);
      c.train.grid.learning_rate = Get(g, "learning_rate", c.train.grid.learning_rate);
      c.train.grid.batch_size = Get(g, "batch_size", c.train.grid.batch_size);
    }
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    c.solver.time_limit_s = Get(s, "time_limit_s", c.solver.time_limit_s);
    c.solver.gap_tol = Get(s, "gap_tol", c.solver.gap_tol);
    c.solver.integrality_tol = Get(s, "integrality_tol", c.solver.integrality_tol);
    c.solver.cut_rounds = Get(s, "cut_rounds", c.solver.cut_rounds);
    c.solver.dive_until_incumbent = Get(s, "dive_until_incumbent", c.solver.dive_until_incumbent);
    c.solver.first_stage_priority = Get(s, "first_stage_priority", c.solver.first_stage_priority);
  }
  if (c.pool_size < 1 || c.n_samples < 1 || c.max_scenarios < 1 || c.max_scenarios > c.pool_size) {
    Fail(ErrorCode::kParseError,
         "config needs pool_size >= max_scenarios >= 1 and n_samples >= 1");
  }
  for (int s : c.scenario_counts) {
    if (s < 1) Fail(ErrorCode::kParseError, "config key 'scenario_counts': counts must be >= 1");
  }
  return c;
}

nlohmann::json ToJson(const PipelineConfig& c) {
  nlohmann::json inst = nlohmann::json::array();
  for (const auto& s : c.instances) inst.push_back(SpecToJson(s));
  std::vector<std::string> methods;
  for (Method m : c.methods) methods.emplace_back(ToString(m));
  nlohmann::json train = {{"hidden", c.train.hidden},
                          {"encoder_hidden1", c.train.encoder_hidden1},
                          {"encoder_hidden2", c.train.encoder_hidden2},
                          {"embed_dim", c.train.embed_dim},
                          {"grid_search", c.train.grid_search},
                          {"use_preset", c.train.use_preset},
                          {"preset_epochs", c.train.preset_epochs
                                                ? nlohmann::json(*c.train.preset_epochs)
                                                : nlohmann::json()},
                          {"config", TrainConfigToJson(c.train.config)},
                          {"grid",
                           {{"hidden", c.train.grid.hidden},
                            {"learning_rate", c.train.grid.learning_rate},
                            {"batch_size", c.train.grid.batch_size}}}};
  nlohmann::json solver = {{"time_limit_s", c.solver.time_limit_s},
                           {"gap_tol", c.solver.gap_tol},
                           {"integrality_tol", c.solver.integrality_tol},
                           {"cut_rounds", c.solver.cut_rounds},
                           {"dive_until_incumbent", c.solver.dive_until_incumbent},
                           {"first_stage_priority", c.solver.first_stage_priority}};
  return {{"output_dir", c.output_dir},       {"seed", c.seed},
          {"instances", inst},                {"scenario_counts", c.scenario_counts},
          {"methods", methods},               {"pool_size", c.pool_size},
          {"n_samples", c.n_samples},         {"max_scenarios", c.max_scenarios},
          {"relax_sampling", c.relax_sampling}, {"data_workers", c.data_workers},
          {"time_to_match", c.time_to_match}, {"exact_reference", c.exact_reference},
          {"write_programs", c.write_programs},
          {"verbose", c.verbose},
          {"train", train},                   {"solver", solver}};
}

sp::ScenarioSet EvaluationScenarios(const sp::TwoStageProblem& problem, int s,
                                    std::uint64_t seed) {
  if (problem.family == "INVP") return instances::InvpGrid(problem, s);
  return instances::SampleScenarios(problem, s, HashLabel("eval_s" + std::to_string(s), seed));
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

template <typename F>
auto Stage(const std::string& stage, const std::string& instance, const std::string& artifact,
           F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const std::exception& e) {
    Fail(ErrorCode::kStageFailed, "stage '" + stage + "' failed for " + instance + " (" +
                                      artifact + "): " + e.what());
  }
}

struct TrainedModel {
  std::string path;
  std::uint64_t digest = 0;
};

nn::Kind KindOf(Method m) { return m == Method::kIcnn ? nn::Kind::kIcnn : nn::Kind::kRelu; }

nn::SurrogateModel TrainOne(const std::string& name, nn::Kind kind, int x_dim, int feature_dim,
                            const nn::TrainingData& data, const PipelineConfig& config) {
  const std::string kind_label(nn::ToString(kind));
  nn::Architecture arch{kind, config.train.hidden, config.train.encoder_hidden1,
                        config.train.encoder_hidden2, config.train.embed_dim};
  nn::TrainConfig tc = config.train.config;
  if (config.train.use_preset) {
    nn::Preset preset;
    if (!nn::FindPreset(name, kind, preset)) {
      Fail(ErrorCode::kInvalidModel, "no preset for " + name);
    }
    arch = preset.architecture;
    tc = preset.config;
    tc.validation_fraction = config.train.config.validation_fraction;
    if (config.train.preset_epochs) tc.epochs = *config.train.preset_epochs;
  }
  tc.seed = HashLabel("train/" + name + "/" + kind_label, config.seed);

  nlohmann::json meta;
  nn::TrainResult result;
  if (config.train.grid_search) {
    auto search = nn::GridSearch(arch, x_dim, data, tc, config.train.grid);
    meta["grid_trials"] = search.trials;
    meta["learning_rate"] = search.config.learning_rate;
    meta["batch_size"] = search.config.batch_size;
    result = std::move(search.best);
  } else {
    Rng rng = Rng::ForStream(config.seed, {"harness", name, kind_label, "init"});
    result = nn::Train(nn::InitModel(arch, x_dim, feature_dim, rng), data, tc);
    meta["learning_rate"] = tc.learning_rate;
    meta["batch_size"] = tc.batch_size;
  }
  meta["instance"] = name;
  meta["epochs"] = tc.epochs;
  meta["optimizer"] = nn::ToString(tc.optimizer);
  meta["val_mae"] = result.val_mae;
  meta["initial_val_mae"] = result.initial_val_mae;
  meta["train_mse"] = result.train_mse;
  meta["best_epoch"] = result.best_epoch;
  meta["hidden_neurons"] = result.model.hidden_neurons();
  result.model.metadata = meta;
  return result.model;
}

void Log(const PipelineConfig& config, const std::string& line) {
  if (config.verbose) std::clog << line << std::endl;
}

void WriteText(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path);
}

std::string Short(double v) {
  std::ostringstream out;
  out << std::setprecision(6) << v;
  return out.str();
}

}  // namespace

std::vector<SolveReport> RunPipeline(const PipelineConfig& config) {
  std::vector<SolveReport> reports;
  fs::create_directories(config.output_dir);
  sp::WriteJsonFile(ToJson(config), (fs::path(config.output_dir) / "config.json").string());

  for (const auto& spec : config.instances) {
    const std::string name = instances::InstanceName(spec);
    const fs::path dir = fs::path(config.output_dir) / name;
    fs::create_directories(dir);

    const std::string problem_path = (dir / "problem.json").string();
    const auto problem = Stage("generate", name, problem_path, [&] {
      auto p = instances::GenerateInstance(spec);
      sp::SaveProblem(p, problem_path);
      return p;
    });

    const std::string pool_path = (dir / "pool.json").string();
    const auto pool = Stage("pool", name, pool_path, [&] {
      auto s = instances::SampleScenarios(problem, config.pool_size, HashLabel("pool", config.seed));
      sp::SaveScenarioSet(s, pool_path);
      return s;
    });

    bool needs_model = false;
    for (Method m : config.methods) needs_model |= m != Method::kEf;

    TrainedModel trained[2];
    if (needs_model) {
      const std::string data_path = (dir / "data.jsonl").string();
      const auto data = Stage("datagen", name, data_path, [&] {
        datagen::GenerateOptions opt;
        opt.relax_integrality = config.relax_sampling;
        opt.workers = config.data_workers;
        Stopwatch clock;
        auto d = datagen::GenerateDataset(problem, pool, config.n_samples, config.max_scenarios,
                                          HashLabel("data", config.seed), opt);
        datagen::SaveDataset(d, data_path);
        Log(config, name + ": " + std::to_string(d.records.size()) + " samples in " +
                        Short(clock.ElapsedSeconds()) + " s");
        return d;
      });
      const auto tdata = datagen::ToTrainingData(data, pool);
      const int feature_dim = static_cast<int>(pool.scenarios.at(0).features.size());
      for (Method m : config.methods) {
        if (m == Method::kEf) continue;
        const nn::Kind kind = KindOf(m);
        const std::string path =
            (dir / (m == Method::kIcnn ? "model_icnn.json" : "model_nn.json")).string();
        Stage("train", name, path, [&] {
          Stopwatch clock;
          const auto model = TrainOne(name, kind, problem.n(), feature_dim, tdata, config);
          nn::SaveModel(model, path);
          Log(config, name + ": trained " + std::string(ToString(m)) + " (val MAE " +
                          Short(model.metadata.value("val_mae", 0.0)) + ") in " +
                          Short(clock.ElapsedSeconds()) + " s");
          return 0;
        });
        trained[m == Method::kIcnn ? 0 : 1] = {path, FileDigest(path)};
      }
    }

    for (int s : config.scenario_counts) {
      const std::string scen_path = (dir / ("scenarios_s" + std::to_string(s) + ".json")).string();
      const auto scenarios = Stage("scenarios", name, scen_path, [&] {
        auto set = EvaluationScenarios(problem, s, config.seed);
        sp::SaveScenarioSet(set, scen_path);
        return set;
      });

      std::optional<EfResult> ef;
      bool has_ef = false;
      for (Method m : config.methods) has_ef |= m == Method::kEf;
      if (has_ef) {
        ef = Stage("solve EF", name, scen_path, [&] {
          if (config.write_programs) {
            const auto mip = sp::BuildExtensiveForm(problem, scenarios);
            WriteText(lp::ToLpFormat(mip.base(), mip.integer_vars()),
                      (dir / ("program_EF_s" + std::to_string(s) + ".lp")).string());
          }
          SolverSettings settings = config.solver;
          settings.record_node_log = config.time_to_match;
          return SolveExtensiveFormReport(problem, scenarios, settings);
        });
        ef->report.instance = name;
        Stage("reference", name, scen_path, [&] {
          AttachReference(*ef, problem, scenarios, config.exact_reference);
          return 0;
        });
        AttachBaseline(ef->report, *ef);
        Log(config, name + " s=" + std::to_string(s) + " EF: " + ef->report.status + " " +
                        Short(ef->report.true_objective) + " in " +
                        Short(ef->report.wall_time_s) + " s; reference " +
                        Short(ef->reference_objective) + " (" + ef->reference_source + ", " +
                        Short(ef->reference_time_s) + " s)");
      }

      for (Method m : config.methods) {
        if (m == Method::kEf) {
          reports.push_back(ef->report);
          continue;
        }
        const TrainedModel& tm = trained[m == Method::kIcnn ? 0 : 1];
        SolveReport r = Stage("solve " + std::string(ToString(m)), name, tm.path, [&] {
          if (FileDigest(tm.path) != tm.digest) {
            Fail(ErrorCode::kIoError, "model file changed during the scenario sweep");
          }
          const auto model = nn::LoadModel(tm.path);
          if (config.write_programs) {
            const auto xi = nn::EncodeScenarios(model.encoder, scenarios);
            WriteText(embed::ToLpText(embed::EmbedSurrogate(model, xi, problem.first)),
                      (dir / ("program_" + std::string(ToString(m)) + "_s" + std::to_string(s) +
                              ".lp")).string());
          }
          try {
            return SolveSurrogateReport(problem, scenarios, model, config.solver);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::kNoIncumbentAtLimit) throw;
            SolveReport failed;
            failed.n_scenarios = s;
            failed.method = m;
            failed.status = "NoIncumbent";
            failed.approx_objective = failed.true_objective = failed.bound =
                std::numeric_limits<double>::quiet_NaN();
            failed.wall_time_s = config.solver.time_limit_s;
            return failed;
          }
        });
        r.instance = name;
        r.model_path = tm.path;
        r.model_digest = tm.digest;
        if (ef) AttachBaseline(r, *ef);
        Log(config, name + " s=" + std::to_string(s) + " " + std::string(ToString(m)) + ": " +
                        r.status + " " + Short(r.true_objective) + " in " +
                        Short(r.wall_time_s) + " s, gap " + Short(r.gap_vs_baseline_pct) + "%");
        reports.push_back(std::move(r));
      }
    }
  }
  WriteReports(reports, config);
  return reports;
}

std::vector<SolveReport> RunPipeline(const std::string& config_file) {
  return RunPipeline(PipelineConfigFromJson(sp::ReadJsonFile(config_file)));
}

void WriteReportsCsv(std::ostream& out, const std::vector<SolveReport>& reports,
                     const PipelineConfig& config) {
  out << "instance,n_scenarios,method,status,approx_objective,true_objective,bound,"
         "reference_objective,reference_source,gap_vs_baseline_pct,gap_vs_ef_bound_pct,wall_time_s,ef_time_to_match_s,nodes,"
         "continuous,integer,binary,rows,aux_continuous,aux_binary,hidden_neurons,"
         "model_digest,seed,commit,gap_tol,integrality_tol,time_limit_s\n";
  const auto old_precision = out.precision(17);
  const std::string commit = GitCommit();
  for (const auto& r : reports) {
    out << r.instance << ',' << r.n_scenarios << ',' << ToString(r.method) << ',' << r.status
        << ',' << r.approx_objective << ',' << r.true_objective << ',' << r.bound << ','
        << r.reference_objective << ',' << r.reference_source << ',' << r.gap_vs_baseline_pct << ',' << r.gap_vs_ef_bound_pct << ',' << r.wall_time_s << ','
        << r.ef_time_to_match_s << ',' << r.nodes << ',' << r.size.n_continuous << ','
        << r.size.n_integer << ',' << r.size.n_binary << ',' << r.size.n_rows << ','
        << r.size.aux_continuous << ',' << r.size.aux_binary << ',' << r.size.hidden_neurons
        << ',' << (r.model_digest ? Hex(r.model_digest) : std::string()) << ',' << config.seed
        << ',' << commit << ',' << config.solver.gap_tol << ',' << config.solver.integrality_tol
        << ',' << config.solver.time_limit_s << '\n';
  }
  out.precision(old_precision);
}

void WriteReports(const std::vector<SolveReport>& reports, const PipelineConfig& config) {
  fs::create_directories(config.output_dir);
  const std::string csv_path = (fs::path(config.output_dir) / "reports.csv").string();
  std::ofstream csv(csv_path);
  if (!csv) Fail(ErrorCode::kIoError, "cannot write " + csv_path);
  WriteReportsCsv(csv, reports, config);
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : reports) all.push_back(ToJson(r));
  sp::WriteJsonFile({{"commit", GitCommit()}, {"config", ToJson(config)}, {"reports", all}},
                    (fs::path(config.output_dir) / "reports.json").string());
}

std::string GitCommit() { return ICSP_GIT_COMMIT; }

std::uint64_t FileDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return 0;
  std::uint64_t h = 14695981039346656037ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace icsp::harness
