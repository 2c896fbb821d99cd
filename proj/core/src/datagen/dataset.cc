#include "icsp/datagen/dataset.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "icsp/common/error.h"
#include "icsp/spmodel/recourse.h"

namespace icsp::datagen {
namespace {

Rng RecordStream(std::uint64_t seed, const std::string& instance_id, int index) {
  return Rng::ForStream(seed, {"datagen", instance_id}).Split(static_cast<std::uint64_t>(index));
}

std::string VectorText(const std::vector<double>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ']';
  return out.str();
}

DatasetRecord MakeRecord(const sp::TwoStageProblem& problem, const sp::ScenarioSet& pool,
                         int index, int max_scen, std::uint64_t seed, bool relax) {
  Rng rng = RecordStream(seed, problem.id, index);
  Rng x_rng = rng.Split("x");
  Rng s_rng = rng.Split("subset");
  DatasetRecord rec;
  rec.x = sp::SampleFirstStage(problem, x_rng, relax);
  const int k = static_cast<int>(s_rng.UniformInt(1, max_scen));
  rec.scenarios = s_rng.SampleWithoutReplacement(pool.size(), k);
  double sum = 0.0;
  for (int s : rec.scenarios) {
    try {
      sum += sp::EvaluateRecourse(problem, rec.x, pool.scenarios[s]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRecourseInfeasible) throw;
      Fail(ErrorCode::kRecourseInfeasible,
           "datagen: record " + std::to_string(index) + ", x = " + VectorText(rec.x) +
               ", scenario '" + pool.scenarios[s].id + "': " + e.what());
    }
  }
  rec.label = sum / static_cast<double>(k);
  return rec;
}

nlohmann::json ProvenanceJson(const Provenance& p) {
  return {{"instance_id", p.instance_id},
          {"pool_id", p.pool_id},
          {"pool_size", p.pool_size},
          {"seed", p.seed},
          {"n_samples", p.n_samples},
          {"max_scenarios_per_sample", p.max_scenarios_per_sample},
          {"relax_integrality", p.relax_integrality}};
}

}  // namespace

void SurrogateDataset::Validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const std::string where = "dataset record " + std::to_string(i);
    if (!std::isfinite(r.label)) Fail(ErrorCode::kInvalidModel, where + ": label is not finite");
    const int k = static_cast<int>(r.scenarios.size());
    if (k < 1 || k > provenance.max_scenarios_per_sample) {
      Fail(ErrorCode::kInvalidModel, where + ": subset size " + std::to_string(k));
    }
    for (int s : r.scenarios) {
      if (s < 0 || s >= provenance.pool_size) {
        Fail(ErrorCode::kInvalidModel, where + ": scenario index " + std::to_string(s));
      }
    }
  }
}

std::vector<int> DrawSubset(std::uint64_t seed, const std::string& instance_id, int index,
                            int pool_size, int max_scen) {
  Rng s_rng = RecordStream(seed, instance_id, index).Split("subset");
  const int k = static_cast<int>(s_rng.UniformInt(1, max_scen));
  return s_rng.SampleWithoutReplacement(pool_size, k);
}

SurrogateDataset GenerateDataset(const sp::TwoStageProblem& problem, const sp::ScenarioSet& pool,
                                 int n_samples, int max_scen, std::uint64_t seed,
                                 const GenerateOptions& options) {
  if (n_samples < 1) Fail(ErrorCode::kInvalidModel, "datagen: n_samples must be >= 1");
  if (max_scen < 1 || pool.size() < max_scen) {
    Fail(ErrorCode::kInvalidModel, "datagen: need pool size " + std::to_string(pool.size()) +
                                       " >= max_scen " + std::to_string(max_scen) + " >= 1");
  }
  SurrogateDataset out;
  out.provenance = {problem.id, pool.id,   pool.size(),
                    seed,       n_samples, max_scen,
                    options.relax_integrality};
  out.records.resize(n_samples);

  const int workers = std::max(1, std::min(options.workers, n_samples));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](int w) {
    try {
      for (int i = w; i < n_samples; i += workers) {
        out.records[i] = MakeRecord(problem, pool, i, max_scen, seed, options.relax_integrality);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void SaveDataset(const SurrogateDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path);
  out << nlohmann::json{{"provenance", ProvenanceJson(data.provenance)}}.dump() << '\n';
  for (const auto& r : data.records) {
    out << nlohmann::json{{"x", r.x}, {"scenarios", r.scenarios}, {"label", r.label}}.dump()
        << '\n';
  }
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path);
}

SurrogateDataset LoadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  SurrogateDataset data;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      if (!have_header) {
        const auto& p = j.at("provenance");
        data.provenance.instance_id = p.at("instance_id").get<std::string>();
        data.provenance.pool_id = p.at("pool_id").get<std::string>();
        data.provenance.pool_size = p.at("pool_size").get<int>();
        data.provenance.seed = p.at("seed").get<std::uint64_t>();
        data.provenance.n_samples = p.at("n_samples").get<int>();
        data.provenance.max_scenarios_per_sample = p.at("max_scenarios_per_sample").get<int>();
        data.provenance.relax_integrality = p.value("relax_integrality", false);
        have_header = true;
        continue;
      }
      DatasetRecord r;
      r.x = j.at("x").get<std::vector<double>>();
      r.scenarios = j.at("scenarios").get<std::vector<int>>();
      r.label = j.at("label").get<double>();
      data.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, path + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) Fail(ErrorCode::kParseError, path + ": missing provenance header");
  try {
    data.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kParseError, path + ": " + e.what());
  }
  return data;
}

nn::TrainingData ToTrainingData(const SurrogateDataset& data, const sp::ScenarioSet& pool) {
  if (pool.size() != data.provenance.pool_size) {
    Fail(ErrorCode::kDimensionMismatch, "dataset was built on a pool of " +
                                            std::to_string(data.provenance.pool_size) +
                                            " scenarios, got " + std::to_string(pool.size()));
  }
  nn::TrainingData t;
  for (const auto& s : pool.scenarios) t.pool_features.push_back(s.features);
  t.records.reserve(data.records.size());
  for (const auto& r : data.records) t.records.push_back({r.x, r.scenarios, r.label});
  return t;
}

}  // namespace icsp::datagen
