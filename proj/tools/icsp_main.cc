// icsp command-line front end. Every subcommand reads and writes the same
// JSON / JSONL artifacts as the harness.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icsp/common/error.h"
#include "icsp/common/rng.h"
#include "icsp/datagen/dataset.h"
#include "icsp/embed/embedding.h"
#include "icsp/harness/harness.h"
#include "icsp/instances/generators.h"
#include "icsp/nn/model.h"
#include "icsp/nn/train.h"
#include "icsp/spmodel/io.h"

namespace {

using namespace icsp;

void WriteOrPrint(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    sp::WriteJsonFile(j, path);
  }
}

struct GenInstanceArgs {
  std::string name, out;
  std::uint64_t seed = 1;
};

struct GenScenariosArgs {
  std::string problem, out;
  int count = 100;
  std::uint64_t seed = 1;
  bool grid = false;
};

struct GenDataArgs {
  std::string problem, pool, out;
  int samples = 1000, max_scenarios = 30, workers = 1;
  std::uint64_t seed = 1;
  bool relax = false;
};

struct TrainArgs {
  std::string data, pool, out, kind = "icnn", optimizer = "adam", preset;
  std::vector<int> hidden{64};
  int enc1 = 64, enc2 = 32, embed_dim = 16, epochs = 200, batch = 32;
  double lr = 1e-3, l1 = 0.0, l2 = 0.0, dropout = 0.0;
  std::uint64_t seed = 1;
  bool grid_search = false;
};

struct EmbedArgs {
  std::string problem, model, scenarios, out;
};

struct SolveArgs {
  std::string problem, scenarios, model, out;
  harness::SolverSettings solver;
};

struct ReportArgs {
  std::string reports;
};

struct RunArgs {
  std::string config, output_dir;
  bool verbose = false;
};

void AddSolverOptions(CLI::App* app, harness::SolverSettings& s) {
  app->add_option("--time-limit", s.time_limit_s, "Seconds per solve")->capture_default_str();
  app->add_option("--gap-tol", s.gap_tol, "Relative optimality gap")->capture_default_str();
  app->add_option("--int-tol", s.integrality_tol, "Integrality tolerance")->capture_default_str();
  app->add_option("--cut-rounds", s.cut_rounds, "Root Gomory rounds")->capture_default_str();
}

int GenInstance(const GenInstanceArgs& a) {
  auto spec = instances::ParseInstanceName(a.name);
  spec.seed = a.seed;
  const auto problem = instances::GenerateInstance(spec);
  WriteOrPrint(sp::ToJson(problem), a.out);
  return 0;
}

int GenScenarios(const GenScenariosArgs& a) {
  const auto problem = sp::LoadProblem(a.problem);
  const auto set = a.grid ? instances::InvpGrid(problem, a.count)
                          : instances::SampleScenarios(problem, a.count, a.seed);
  WriteOrPrint(sp::ToJson(set), a.out);
  return 0;
}

int GenData(const GenDataArgs& a) {
  const auto problem = sp::LoadProblem(a.problem);
  const auto pool = sp::LoadScenarioSet(a.pool);
  datagen::GenerateOptions opt;
  opt.relax_integrality = a.relax;
  opt.workers = a.workers;
  const auto data =
      datagen::GenerateDataset(problem, pool, a.samples, a.max_scenarios, a.seed, opt);
  datagen::SaveDataset(data, a.out);
  std::cout << data.records.size() << " records written to " << a.out << '\n';
  return 0;
}

int TrainCmd(const TrainArgs& a) {
  const auto pool = sp::LoadScenarioSet(a.pool);
  const auto data = datagen::LoadDataset(a.data);
  const auto tdata = datagen::ToTrainingData(data, pool);
  const int x_dim = static_cast<int>(data.records.at(0).x.size());
  const int feature_dim = static_cast<int>(pool.scenarios.at(0).features.size());
  const nn::Kind kind = nn::ParseKind(a.kind);

  nn::Architecture arch{kind, a.hidden, a.enc1, a.enc2, a.embed_dim};
  nn::TrainConfig config;
  config.epochs = a.epochs;
  config.batch_size = a.batch;
  config.learning_rate = a.lr;
  config.l1_penalty = a.l1;
  config.l2_penalty = a.l2;
  config.optimizer = nn::ParseOptimizer(a.optimizer);
  config.dropout_rate = a.dropout;
  config.seed = a.seed;
  if (!a.preset.empty()) {
    nn::Preset preset;
    if (!nn::FindPreset(a.preset, kind, preset)) {
      Fail(ErrorCode::kInvalidModel, "no preset named '" + a.preset + "'");
    }
    arch = preset.architecture;
    const int epochs = config.epochs;
    config = preset.config;
    config.epochs = epochs;
    config.seed = a.seed;
  }

  nn::TrainResult result;
  if (a.grid_search) {
    auto search = nn::GridSearch(arch, x_dim, tdata, config, nn::SearchGrid{});
    std::cout << search.trials.dump(2) << '\n';
    result = std::move(search.best);
  } else {
    Rng rng = Rng::ForStream(a.seed, {"cli", "init"});
    result = nn::Train(nn::InitModel(arch, x_dim, feature_dim, rng), tdata, config);
  }
  result.model.metadata["val_mae"] = result.val_mae;
  result.model.metadata["best_epoch"] = result.best_epoch;
  nn::SaveModel(result.model, a.out);
  std::cout << "val MAE " << result.val_mae << " (initial " << result.initial_val_mae
            << ", best epoch " << result.best_epoch << ")\n";
  return 0;
}

int EmbedCmd(const EmbedArgs& a) {
  const auto problem = sp::LoadProblem(a.problem);
  const auto model = nn::LoadModel(a.model);
  const auto scenarios = sp::LoadScenarioSet(a.scenarios);
  const auto xi = nn::EncodeScenarios(model.encoder, scenarios);
  const auto embedded = embed::EmbedSurrogate(model, xi, problem.first);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) Fail(ErrorCode::kIoError, "cannot write " + a.out);
    out << embed::ToLpText(embedded);
  }
  std::cout << embed::ToJson(embedded.size).dump(2) << '\n';
  return 0;
}

int SolveCmd(const SolveArgs& a) {
  const auto problem = sp::LoadProblem(a.problem);
  const auto scenarios = sp::LoadScenarioSet(a.scenarios);
  harness::SolveReport report;
  if (a.model.empty()) {
    report = harness::SolveExtensiveFormReport(problem, scenarios, a.solver).report;
  } else {
    report = harness::SolveSurrogateReport(problem, scenarios, nn::LoadModel(a.model), a.solver);
    report.model_path = a.model;
    report.model_digest = harness::FileDigest(a.model);
  }
  WriteOrPrint(harness::ToJson(report), a.out);
  return 0;
}

std::string Cell(const nlohmann::json& v, int precision) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(precision) << v.get<double>();
    return out.str();
  }
  return v.is_string() ? v.get<std::string>() : v.dump();
}

int ReportCmd(const ReportArgs& a) {
  const auto j = sp::ReadJsonFile(a.reports);
  const auto& rows = j.at("reports");
  std::cout << std::left << std::setw(12) << "instance" << std::setw(6) << "s" << std::setw(7)
            << "method" << std::setw(11) << "status" << std::setw(16) << "true obj"
            << std::setw(10) << "gap %" << std::setw(10) << "time s" << "nodes\n";
  for (const auto& r : rows) {
    std::cout << std::left << std::setw(12) << Cell(r.at("instance"), 0) << std::setw(6)
              << Cell(r.at("n_scenarios"), 0) << std::setw(7) << Cell(r.at("method"), 0)
              << std::setw(11) << Cell(r.at("status"), 0) << std::setw(16)
              << Cell(r.at("true_objective"), 4) << std::setw(10)
              << Cell(r.at("gap_vs_baseline_pct"), 2) << std::setw(10)
              << Cell(r.at("wall_time_s"), 3) << Cell(r.at("nodes"), 0) << '\n';
  }
  return 0;
}

int RunCmd(const RunArgs& a) {
  auto config = harness::PipelineConfigFromJson(sp::ReadJsonFile(a.config));
  if (!a.output_dir.empty()) config.output_dir = a.output_dir;
  config.verbose = config.verbose || a.verbose;
  const auto reports = harness::RunPipeline(config);
  std::cout << reports.size() << " reports written to " << config.output_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-based two-stage stochastic programming toolkit"};
  app.require_subcommand(1);

  GenInstanceArgs gi;
  auto* c_gi = app.add_subcommand("gen-instance", "Generate a benchmark instance");
  c_gi->add_option("--name", gi.name, "CFLP_10_10, SSLP_5_25, INVP_B_E, ...")->required();
  c_gi->add_option("--seed", gi.seed)->capture_default_str();
  c_gi->add_option("-o,--out", gi.out, "Output file (stdout if omitted)");

  GenScenariosArgs gs;
  auto* c_gs = app.add_subcommand("gen-scenarios", "Sample a scenario set");
  c_gs->add_option("--problem", gs.problem)->required()->check(CLI::ExistingFile);
  c_gs->add_option("--count", gs.count)->capture_default_str();
  c_gs->add_option("--seed", gs.seed)->capture_default_str();
  c_gs->add_flag("--grid", gs.grid, "Deterministic INVP grid instead of samples");
  c_gs->add_option("-o,--out", gs.out);

  GenDataArgs gd;
  auto* c_gd = app.add_subcommand("gen-data", "Generate surrogate training data");
  c_gd->add_option("--problem", gd.problem)->required()->check(CLI::ExistingFile);
  c_gd->add_option("--pool", gd.pool)->required()->check(CLI::ExistingFile);
  c_gd->add_option("--samples", gd.samples)->capture_default_str();
  c_gd->add_option("--max-scenarios", gd.max_scenarios)->capture_default_str();
  c_gd->add_option("--seed", gd.seed)->capture_default_str();
  c_gd->add_option("--workers", gd.workers)->capture_default_str();
  c_gd->add_flag("--relax", gd.relax, "Sample x from the continuous relaxation");
  c_gd->add_option("-o,--out", gd.out)->required();

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train a surrogate");
  c_tr->add_option("--data", tr.data)->required()->check(CLI::ExistingFile);
  c_tr->add_option("--pool", tr.pool)->required()->check(CLI::ExistingFile);
  c_tr->add_option("--kind", tr.kind, "icnn or relu")->capture_default_str();
  c_tr->add_option("--hidden", tr.hidden, "Decoder hidden widths")->delimiter(',');
  c_tr->add_option("--encoder-hidden1", tr.enc1)->capture_default_str();
  c_tr->add_option("--encoder-hidden2", tr.enc2)->capture_default_str();
  c_tr->add_option("--embed-dim", tr.embed_dim)->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs)->capture_default_str();
  c_tr->add_option("--batch-size", tr.batch)->capture_default_str();
  c_tr->add_option("--lr", tr.lr)->capture_default_str();
  c_tr->add_option("--l1", tr.l1)->capture_default_str();
  c_tr->add_option("--l2", tr.l2)->capture_default_str();
  c_tr->add_option("--dropout", tr.dropout)->capture_default_str();
  c_tr->add_option("--optimizer", tr.optimizer, "adam, sgd or rmsprop")->capture_default_str();
  c_tr->add_option("--seed", tr.seed)->capture_default_str();
  c_tr->add_option("--preset", tr.preset, "Use the stored configuration for an instance");
  c_tr->add_flag("--grid-search", tr.grid_search, "Search hidden width, lr and batch size");
  c_tr->add_option("-o,--out", tr.out)->required();

  EmbedArgs em;
  auto* c_em = app.add_subcommand("embed", "Embed a surrogate and print its size");
  c_em->add_option("--problem", em.problem)->required()->check(CLI::ExistingFile);
  c_em->add_option("--model", em.model)->required()->check(CLI::ExistingFile);
  c_em->add_option("--scenarios", em.scenarios)->required()->check(CLI::ExistingFile);
  c_em->add_option("-o,--out", em.out, "Write the program in LP format");

  SolveArgs so;
  auto* c_so = app.add_subcommand("solve", "Solve the extensive form or a surrogate");
  c_so->add_option("--problem", so.problem)->required()->check(CLI::ExistingFile);
  c_so->add_option("--scenarios", so.scenarios)->required()->check(CLI::ExistingFile);
  c_so->add_option("--model", so.model, "Surrogate model; the extensive form if omitted")
      ->check(CLI::ExistingFile);
  AddSolverOptions(c_so, so.solver);
  c_so->add_option("-o,--out", so.out);

  ReportArgs rp;
  auto* c_rp = app.add_subcommand("report", "Print a reports.json file as a table");
  c_rp->add_option("reports", rp.reports)->required()->check(CLI::ExistingFile);

  RunArgs rn;
  auto* c_rn = app.add_subcommand("run", "Run the full pipeline from a JSON config");
  c_rn->add_option("--config", rn.config)->required()->check(CLI::ExistingFile);
  c_rn->add_option("--output-dir", rn.output_dir, "Overrides output_dir of the config");
  c_rn->add_flag("-v,--verbose", rn.verbose);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_gi) return GenInstance(gi);
    if (*c_gs) return GenScenarios(gs);
    if (*c_gd) return GenData(gd);
    if (*c_tr) return TrainCmd(tr);
    if (*c_em) return EmbedCmd(em);
    if (*c_so) return SolveCmd(so);
    if (*c_rp) return ReportCmd(rp);
    if (*c_rn) return RunCmd(rn);
  } catch (const Error& e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
