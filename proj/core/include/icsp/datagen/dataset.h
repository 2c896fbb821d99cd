#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icsp/nn/train.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::datagen {

struct DatasetRecord {
  std::vector<double> x;
  std::vector<int> scenarios;  // indices into the pool
  double label = 0.0;          // (1/k) sum of Q(x, s) over the subset
};

struct Provenance {
  std::string instance_id;
  std::string pool_id;
  int pool_size = 0;
  std::uint64_t seed = 0;
  int n_samples = 0;
  int max_scenarios_per_sample = 0;
  bool relax_integrality = false;
};

struct SurrogateDataset {
  Provenance provenance;
  std::vector<DatasetRecord> records;

  // Finite labels, subset sizes in [1, max], indices inside the pool.
  // Throws Error(kInvalidModel).
  void Validate() const;
};

struct GenerateOptions {
  // Draw x from the continuous relaxation of the first-stage set.
  bool relax_integrality = false;
  // Records are split across this many threads; output is identical for
  // any value.
  int workers = 1;
};

// `n_samples` records. Record i draws from its own stream, keyed by seed and
// i: x from the first-stage sampler, a subset size uniform on
// {1..max_scen}, then that many distinct pool scenarios. Throws
// Error(kInvalidModel) unless pool.size() >= max_scen >= 1 and n_samples >= 1,
// and Error(kRecourseInfeasible) naming the record, x and scenario.
SurrogateDataset GenerateDataset(const sp::TwoStageProblem& problem, const sp::ScenarioSet& pool,
                                 int n_samples, int max_scen, std::uint64_t seed,
                                 const GenerateOptions& options = {});

// Subset size and scenario indices that record `index` would draw.
std::vector<int> DrawSubset(std::uint64_t seed, const std::string& instance_id, int index,
                            int pool_size, int max_scen);

// JSON lines: a header {"provenance": {...}} followed by one record per line.
void SaveDataset(const SurrogateDataset& data, const std::string& path);
SurrogateDataset LoadDataset(const std::string& path);

// Training view with the pool's feature vectors. Throws
// Error(kDimensionMismatch) if the pool does not match the provenance.
nn::TrainingData ToTrainingData(const SurrogateDataset& data, const sp::ScenarioSet& pool);

}  // namespace icsp::datagen
