#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "icsp/nn/model.h"

namespace icsp::nn {

// One supervised sample: a first-stage point, the indices of its scenario
// subset in the feature pool, and the expected recourse over that subset.
struct TrainingRecord {
  std::vector<double> x;
  std::vector<int> scenarios;
  double label = 0.0;
};

struct TrainingData {
  std::vector<std::vector<double>> pool_features;
  std::vector<TrainingRecord> records;

  // Throws Error(kDimensionMismatch) for ragged data or bad indices and
  // Error(kEmptyScenarioSet) for an empty subset or dataset.
  void Validate(int x_dim, int feature_dim) const;
};

enum class Optimizer { kAdam, kSgd, kRmsprop };

std::string_view ToString(Optimizer optimizer);
Optimizer ParseOptimizer(std::string_view name);

struct TrainConfig {
  int epochs = 200;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double l1_penalty = 0.0;
  double l2_penalty = 0.0;
  Optimizer optimizer = Optimizer::kAdam;
  std::uint64_t seed = 0;
  double dropout_rate = 0.0;
  double validation_fraction = 0.2;

  // Throws Error(kInvalidModel).
  void Validate() const;
};

struct TrainResult {
  SurrogateModel model;  // parameters with the best validation MAE
  double train_mse = 0.0;
  double val_mae = 0.0;
  double initial_val_mae = 0.0;
  int best_epoch = 0;  // 0 means the initial parameters were never beaten
  std::vector<double> val_mae_history;
};

// Trains encoder and decoder jointly on MSE of standardized targets; the
// target mean and std of the training split are stored in the model. ICNN
// hidden weights are clamped at zero after every step. L1/L2 penalties act
// on weight matrices, not biases. Losses are in original units.
// Throws Error(kNonFiniteLoss) with the epoch and batch on divergence.
TrainResult Train(SurrogateModel model, const TrainingData& data, const TrainConfig& config);

// Mean absolute error in original units over the given records.
double MeanAbsoluteError(const SurrogateModel& model, const TrainingData& data,
                         const std::vector<int>& records);

// Analytic gradient of the unpenalized MSE (in the model's standardized
// units, over all records, no dropout) against central differences. Error
// per entry is |a - f| / max(1, |a|, |f|). eps must lie in [1e-7, 1e-3].
struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  int entries = 0;
};
GradCheckResult GradCheck(const SurrogateModel& model, const TrainingData& data, double eps);

// Fixed search grid: decoder hidden width x learning rate x batch size.
struct SearchGrid {
  std::vector<int> hidden{64, 128};
  std::vector<double> learning_rate{1e-3, 1e-2};
  std::vector<int> batch_size{32, 128};
};

struct SearchResult {
  TrainResult best;
  Architecture architecture;
  TrainConfig config;
  nlohmann::json trials = nlohmann::json::array();
};

// Trains one model per grid point (one hidden layer of the given width,
// encoder from `base`) and keeps the lowest validation MAE; ties go to the
// earlier point.
SearchResult GridSearch(const Architecture& base, int x_dim, const TrainingData& data,
                        const TrainConfig& base_config, const SearchGrid& grid);

// Best configurations found by the reference random search, keyed by
// instance name (CFLP_10_10, SSLP_5_25, INVP_B_E, ...). INVP variants share
// one preset. Returns false for an unknown name.
struct Preset {
  Architecture architecture;
  TrainConfig config;
};
bool FindPreset(std::string_view instance, Kind kind, Preset& out);

}  // namespace icsp::nn
