#include "icsp/nn/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <Eigen/Dense>

#include "icsp/common/error.h"

namespace icsp::nn {
namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap View(const Matrix& m) { return ConstMap(m.data.data(), m.rows, m.cols); }
MutMap View(Matrix& m) { return MutMap(m.data.data(), m.rows, m.cols); }
Eigen::Map<const Vec> View(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}
Eigen::Map<Vec> View(std::vector<double>& v) {
  return Eigen::Map<Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Tensor {
  double* data;
  std::size_t size;
  bool weight;  // penalized
  bool clamp;   // ICNN hidden-to-hidden, kept >= 0
  std::string name;
};

std::vector<Tensor> Tensors(SurrogateModel& m) {
  std::vector<Tensor> out;
  auto add_m = [&](Matrix& w, bool clamp, std::string name) {
    out.push_back({w.data.data(), w.data.size(), true, clamp, std::move(name)});
  };
  auto add_b = [&](std::vector<double>& b, std::string name) {
    out.push_back({b.data(), b.size(), false, false, std::move(name)});
  };
  for (std::size_t l = 0; l < m.encoder.psi1_W.size(); ++l) {
    add_m(m.encoder.psi1_W[l], false, "psi1.W" + std::to_string(l));
    add_b(m.encoder.psi1_b[l], "psi1.b" + std::to_string(l));
  }
  add_m(m.encoder.psi2_W, false, "psi2.W");
  add_b(m.encoder.psi2_b, "psi2.b");
  if (m.kind == Kind::kIcnn) {
    for (int k = 0; k < m.icnn.num_layers(); ++k) {
      if (k > 0) add_m(m.icnn.W[k], true, "icnn.W" + std::to_string(k));
      add_m(m.icnn.S[k], false, "icnn.S" + std::to_string(k));
      add_b(m.icnn.b[k], "icnn.b" + std::to_string(k));
    }
  } else {
    for (int l = 0; l < m.relu.num_layers(); ++l) {
      add_m(m.relu.W[l], false, "relu.W" + std::to_string(l));
      add_b(m.relu.b[l], "relu.b" + std::to_string(l));
    }
  }
  return out;
}

SurrogateModel ZeroLike(const SurrogateModel& m) {
  SurrogateModel g = m;
  for (Tensor& t : Tensors(g)) std::fill(t.data, t.data + t.size, 0.0);
  return g;
}

Mat ReluOf(Mat a) { return a.cwiseMax(0.0); }

// ReLU derivative from post-activations.
Mat Active(const Mat& z) { return (z.array() > 0.0).cast<double>().matrix(); }

// Activations of one mini-batch, enough to run the backward pass.
struct Batch {
  std::vector<int> pool_ids;  // local column -> pool index
  Mat F, H1, H2, agg, M, Z0, Z0d;
  std::vector<Mat> z;          // decoder activations; z[0] unused for ICNN
  Eigen::RowVectorXd out;
};

Batch Forward(const SurrogateModel& m, const TrainingData& data, const std::vector<int>& records,
              const Mat* mask) {
  Batch b;
  std::unordered_map<int, int> local;
  for (int r : records) {
    for (int s : data.records[r].scenarios) {
      if (local.emplace(s, static_cast<int>(b.pool_ids.size())).second) b.pool_ids.push_back(s);
    }
  }
  const int P = static_cast<int>(b.pool_ids.size());
  const int B = static_cast<int>(records.size());
  const auto& enc = m.encoder;
  b.F.resize(enc.feature_dim, P);
  for (int j = 0; j < P; ++j) b.F.col(j) = View(data.pool_features[b.pool_ids[j]]);
  b.H1 = ReluOf((View(enc.psi1_W[0]) * b.F).colwise() + View(enc.psi1_b[0]));
  b.H2 = ReluOf((View(enc.psi1_W[1]) * b.H1).colwise() + View(enc.psi1_b[1]));
  b.agg = Mat::Zero(P, B);
  for (int i = 0; i < B; ++i) {
    const auto& ids = data.records[records[i]].scenarios;
    const double w = 1.0 / static_cast<double>(ids.size());
    for (int s : ids) b.agg(local.at(s), i) += w;
  }
  b.M = b.H2 * b.agg;
  const Mat xi = (View(enc.psi2_W) * b.M).colwise() + View(enc.psi2_b);
  b.Z0.resize(m.x_dim + xi.rows(), B);
  for (int i = 0; i < B; ++i) {
    b.Z0.col(i).head(m.x_dim) = View(data.records[records[i]].x);
  }
  b.Z0.bottomRows(xi.rows()) = xi;
  b.Z0d = mask ? Mat(b.Z0.cwiseProduct(*mask)) : b.Z0;

  if (m.kind == Kind::kIcnn) {
    const auto& p = m.icnn;
    const int K = p.num_layers();
    b.z.assign(K + 1, Mat());
    for (int k = 0; k < K; ++k) {
      Mat pre = View(p.S[k]) * b.Z0d;
      if (k > 0) pre += View(p.W[k]) * b.z[k];
      pre.colwise() += View(p.b[k]);
      b.z[k + 1] = k + 1 < K ? ReluOf(std::move(pre)) : std::move(pre);
    }
    b.out = b.z[K].row(0);
  } else {
    const auto& p = m.relu;
    const int L = p.num_layers();
    b.z.assign(L + 1, Mat());
    b.z[0] = b.Z0d;
    for (int l = 0; l < L; ++l) {
      Mat pre = View(p.W[l]) * b.z[l];
      pre.colwise() += View(p.b[l]);
      b.z[l + 1] = l + 1 < L ? ReluOf(std::move(pre)) : std::move(pre);
    }
    b.out = b.z[L].row(0);
  }
  return b;
}

// Accumulates d(mean squared error)/d(params) into g.
void Backward(const SurrogateModel& m, const Batch& b, const Eigen::RowVectorXd& target,
              const Mat* mask, SurrogateModel& g) {
  const double B = static_cast<double>(b.out.size());
  Mat g_next = (2.0 / B) * (b.out - target);  // 1 x B
  Mat g_z0d = Mat::Zero(b.Z0.rows(), b.Z0.cols());
  if (m.kind == Kind::kIcnn) {
    const auto& p = m.icnn;
    for (int k = p.num_layers() - 1; k >= 0; --k) {
      // g_next holds d/d(pre_k); apply the ReLU mask for hidden layers.
      if (k + 1 < p.num_layers()) g_next = g_next.cwiseProduct(Active(b.z[k + 1]));
      View(g.icnn.S[k]) += g_next * b.Z0d.transpose();
      View(g.icnn.b[k]) += g_next.rowwise().sum();
      g_z0d += View(p.S[k]).transpose() * g_next;
      if (k > 0) {
        View(g.icnn.W[k]) += g_next * b.z[k].transpose();
        g_next = View(p.W[k]).transpose() * g_next;
      }
    }
  } else {
    const auto& p = m.relu;
    for (int l = p.num_layers() - 1; l >= 0; --l) {
      if (l + 1 < p.num_layers()) g_next = g_next.cwiseProduct(Active(b.z[l + 1]));
      View(g.relu.W[l]) += g_next * b.z[l].transpose();
      View(g.relu.b[l]) += g_next.rowwise().sum();
      g_next = View(p.W[l]).transpose() * g_next;
    }
    g_z0d = std::move(g_next);
  }
  const Mat g_z0 = mask ? Mat(g_z0d.cwiseProduct(*mask)) : g_z0d;
  const Mat g_xi = g_z0.bottomRows(m.encoder.embed_dim());

  const auto& enc = m.encoder;
  View(g.encoder.psi2_W) += g_xi * b.M.transpose();
  View(g.encoder.psi2_b) += g_xi.rowwise().sum();
  const Mat g_M = View(enc.psi2_W).transpose() * g_xi;
  const Mat g_pre2 = (g_M * b.agg.transpose()).cwiseProduct(Active(b.H2));
  View(g.encoder.psi1_W[1]) += g_pre2 * b.H1.transpose();
  View(g.encoder.psi1_b[1]) += g_pre2.rowwise().sum();
  const Mat g_pre1 = (View(enc.psi1_W[1]).transpose() * g_pre2).cwiseProduct(Active(b.H1));
  View(g.encoder.psi1_W[0]) += g_pre1 * b.F.transpose();
  View(g.encoder.psi1_b[0]) += g_pre1.rowwise().sum();
}

Eigen::RowVectorXd Targets(const TrainingData& data, const std::vector<int>& records, double mean,
                           double sd) {
  Eigen::RowVectorXd t(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] = (data.records[records[i]].label - mean) / sd;
  }
  return t;
}

std::vector<double> Predictions(const SurrogateModel& m, const TrainingData& data,
                                const std::vector<int>& records) {
  constexpr std::size_t kChunk = 256;
  std::vector<double> out;
  out.reserve(records.size());
  for (std::size_t lo = 0; lo < records.size(); lo += kChunk) {
    const std::vector<int> chunk(records.begin() + static_cast<std::ptrdiff_t>(lo),
                                 records.begin() + static_cast<std::ptrdiff_t>(std::min(records.size(), lo + kChunk)));
    const Batch b = Forward(m, data, chunk, nullptr);
    for (Eigen::Index i = 0; i < b.out.size(); ++i) {
      out.push_back(m.target_mean + m.target_std * b.out[i]);
    }
  }
  return out;
}

double MeanSquaredError(const SurrogateModel& m, const TrainingData& data,
                        const std::vector<int>& records) {
  if (records.empty()) return 0.0;
  const std::vector<double> pred = Predictions(m, data, records);
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double d = pred[i] - data.records[records[i]].label;
    acc += d * d;
  }
  return acc / static_cast<double>(records.size());
}

double StandardizedLoss(const SurrogateModel& m, const TrainingData& data,
                        const std::vector<int>& records) {
  const Batch b = Forward(m, data, records, nullptr);
  const Eigen::RowVectorXd t = Targets(data, records, m.target_mean, m.target_std);
  return (b.out - t).squaredNorm() / static_cast<double>(records.size());
}

class OptimizerState {
 public:
  OptimizerState(const TrainConfig& cfg, const std::vector<Tensor>& tensors) : cfg_(cfg) {
    for (const Tensor& t : tensors) {
      m_.emplace_back(t.size, 0.0);
      v_.emplace_back(t.size, 0.0);
    }
  }

  void Step(std::vector<Tensor>& params, const std::vector<Tensor>& grads) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kRho = 0.99, kEps = 1e-8;
    ++t_;
    const double lr = cfg_.learning_rate;
    const double c1 = 1.0 - std::pow(kBeta1, t_);
    const double c2 = 1.0 - std::pow(kBeta2, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      Tensor& p = params[k];
      const double* gk = grads[k].data;
      for (std::size_t i = 0; i < p.size; ++i) {
        double g = gk[i];
        if (p.weight) {
          const double w = p.data[i];
          g += cfg_.l1_penalty * (w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0)) + 2.0 * cfg_.l2_penalty * w;
        }
        double& m = m_[k][i];
        double& v = v_[k][i];
        switch (cfg_.optimizer) {
          case Optimizer::kAdam:
            m = kBeta1 * m + (1.0 - kBeta1) * g;
            v = kBeta2 * v + (1.0 - kBeta2) * g * g;
            p.data[i] -= lr * (m / c1) / (std::sqrt(v / c2) + kEps);
            break;
          case Optimizer::kRmsprop:
            v = kRho * v + (1.0 - kRho) * g * g;
            p.data[i] -= lr * g / (std::sqrt(v) + kEps);
            break;
          case Optimizer::kSgd:
            p.data[i] -= lr * g;
            break;
        }
        if (p.clamp && p.data[i] < 0.0) p.data[i] = 0.0;
      }
    }
  }

 private:
  const TrainConfig& cfg_;
  std::vector<std::vector<double>> m_, v_;
  int t_ = 0;
};

double Penalty(const std::vector<Tensor>& tensors, const TrainConfig& cfg) {
  if (cfg.l1_penalty == 0.0 && cfg.l2_penalty == 0.0) return 0.0;
  double l1 = 0.0, l2 = 0.0;
  for (const Tensor& t : tensors) {
    if (!t.weight) continue;
    for (std::size_t i = 0; i < t.size; ++i) {
      l1 += std::abs(t.data[i]);
      l2 += t.data[i] * t.data[i];
    }
  }
  return cfg.l1_penalty * l1 + cfg.l2_penalty * l2;
}

}  // namespace

void TrainingData::Validate(int x_dim, int feature_dim) const {
  if (records.empty()) Fail(ErrorCode::kEmptyScenarioSet, "training data: no records");
  for (const auto& f : pool_features) {
    if (static_cast<int>(f.size()) != feature_dim) {
      Fail(ErrorCode::kDimensionMismatch, "training data: scenario feature length " +
                                              std::to_string(f.size()) + ", expected " +
                                              std::to_string(feature_dim));
    }
  }
  const int P = static_cast<int>(pool_features.size());
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (static_cast<int>(rec.x.size()) != x_dim) {
      Fail(ErrorCode::kDimensionMismatch, "training data: record " + std::to_string(r) +
                                              " has x of length " + std::to_string(rec.x.size()));
    }
    if (rec.scenarios.empty()) {
      Fail(ErrorCode::kEmptyScenarioSet, "training data: record " + std::to_string(r) +
                                             " has no scenarios");
    }
    for (int s : rec.scenarios) {
      if (s < 0 || s >= P) {
        Fail(ErrorCode::kDimensionMismatch, "training data: record " + std::to_string(r) +
                                                " references scenario " + std::to_string(s));
      }
    }
  }
}

std::string_view ToString(Optimizer optimizer) {
  switch (optimizer) {
    case Optimizer::kAdam: return "adam";
    case Optimizer::kSgd: return "sgd";
    case Optimizer::kRmsprop: return "rmsprop";
  }
  return "?";
}

Optimizer ParseOptimizer(std::string_view name) {
  if (name == "adam" || name == "Adam") return Optimizer::kAdam;
  if (name == "sgd" || name == "SGD") return Optimizer::kSgd;
  if (name == "rmsprop" || name == "RMSprop") return Optimizer::kRmsprop;
  Fail(ErrorCode::kParseError, "unknown optimizer '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  if (epochs < 1) Fail(ErrorCode::kInvalidModel, "train: epochs must be >= 1");
  if (batch_size < 1) Fail(ErrorCode::kInvalidModel, "train: batch_size must be >= 1");
  if (!(learning_rate >= 0.0) || !(l1_penalty >= 0.0) || !(l2_penalty >= 0.0)) {
    Fail(ErrorCode::kInvalidModel, "train: rates must be non-negative");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    Fail(ErrorCode::kInvalidModel, "train: dropout_rate must lie in [0, 1)");
  }
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidModel, "train: validation_fraction must lie in [0, 1)");
  }
}

double MeanAbsoluteError(const SurrogateModel& model, const TrainingData& data,
                         const std::vector<int>& records) {
  if (records.empty()) return 0.0;
  const std::vector<double> pred = Predictions(model, data, records);
  double acc = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    acc += std::abs(pred[i] - data.records[records[i]].label);
  }
  return acc / static_cast<double>(records.size());
}

TrainResult Train(SurrogateModel model, const TrainingData& data, const TrainConfig& config) {
  config.Validate();
  data.Validate(model.x_dim, model.encoder.feature_dim);
  if (model.decoder_input_dim() != model.x_dim + model.encoder.embed_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "train: decoder input does not equal x_dim + embed_dim");
  }

  const int n = static_cast<int>(data.records.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng = Rng::ForStream(config.seed, {"nn", "split"});
  split_rng.Shuffle(order);
  int n_val = static_cast<int>(std::lround(config.validation_fraction * n));
  if (n >= 2) n_val = std::clamp(n_val, config.validation_fraction > 0.0 ? 1 : 0, n - 1);
  else n_val = 0;
  std::vector<int> train(order.begin(), order.end() - n_val);
  std::vector<int> val(order.end() - n_val, order.end());
  if (val.empty()) val = train;

  double mean = 0.0;
  for (int r : train) mean += data.records[r].label;
  mean /= static_cast<double>(train.size());
  double var = 0.0;
  for (int r : train) var += (data.records[r].label - mean) * (data.records[r].label - mean);
  var /= static_cast<double>(train.size());
  const double sd = std::sqrt(var);
  model.target_mean = mean;
  model.target_std = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;

  TrainResult result;
  result.model = model;
  result.initial_val_mae = MeanAbsoluteError(model, data, val);
  result.val_mae = result.initial_val_mae;

  auto params = Tensors(model);
  SurrogateModel grad = ZeroLike(model);
  auto grads = Tensors(grad);
  OptimizerState opt(config, params);
  Rng batch_rng = Rng::ForStream(config.seed, {"nn", "batches"});
  Rng drop_rng = Rng::ForStream(config.seed, {"nn", "dropout"});
  const double keep = 1.0 - config.dropout_rate;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    batch_rng.Shuffle(train);
    for (std::size_t lo = 0, bi = 0; lo < train.size(); lo += config.batch_size, ++bi) {
      const std::vector<int> batch(
          train.begin() + static_cast<std::ptrdiff_t>(lo),
          train.begin() + static_cast<std::ptrdiff_t>(
                              std::min(train.size(), lo + static_cast<std::size_t>(config.batch_size))));
      Mat mask;
      const Mat* mask_ptr = nullptr;
      if (config.dropout_rate > 0.0) {
        mask.resize(model.decoder_input_dim(), static_cast<Eigen::Index>(batch.size()));
        for (Eigen::Index c = 0; c < mask.cols(); ++c) {
          for (Eigen::Index r = 0; r < mask.rows(); ++r) {
            mask(r, c) = drop_rng.Bernoulli(keep) ? 1.0 / keep : 0.0;
          }
        }
        mask_ptr = &mask;
      }
      const Batch b = Forward(model, data, batch, mask_ptr);
      const Eigen::RowVectorXd t = Targets(data, batch, model.target_mean, model.target_std);
      const double loss =
          (b.out - t).squaredNorm() / static_cast<double>(batch.size()) + Penalty(params, config);
      if (!std::isfinite(loss)) {
        Fail(ErrorCode::kNonFiniteLoss, "train: loss became " + std::to_string(loss) +
                                            " at epoch " + std::to_string(epoch) + ", batch " +
                                            std::to_string(bi) + " (lr " +
                                            std::to_string(config.learning_rate) + ")");
      }
      for (Tensor& g : grads) std::fill(g.data, g.data + g.size, 0.0);
      Backward(model, b, t, mask_ptr, grad);
      opt.Step(params, grads);
    }
    const double mae = MeanAbsoluteError(model, data, val);
    if (!std::isfinite(mae)) {
      Fail(ErrorCode::kNonFiniteLoss, "train: validation MAE became non-finite at epoch " +
                                          std::to_string(epoch));
    }
    result.val_mae_history.push_back(mae);
    if (mae < result.val_mae) {
      result.val_mae = mae;
      result.best_epoch = epoch;
      result.model = model;
    }
  }
  result.train_mse = MeanSquaredError(result.model, data, train);
  return result;
}

GradCheckResult GradCheck(const SurrogateModel& model, const TrainingData& data, double eps) {
  if (!(eps >= 1e-7 && eps <= 1e-3)) {
    Fail(ErrorCode::kInvalidModel, "grad_check: eps must lie in [1e-7, 1e-3]");
  }
  data.Validate(model.x_dim, model.encoder.feature_dim);
  std::vector<int> all(data.records.size());
  std::iota(all.begin(), all.end(), 0);

  const Batch b = Forward(model, data, all, nullptr);
  SurrogateModel grad = ZeroLike(model);
  Backward(model, b, Targets(data, all, model.target_mean, model.target_std), nullptr, grad);

  GradCheckResult result;
  SurrogateModel probe = model;
  auto probe_t = Tensors(probe);
  const auto grad_t = Tensors(grad);
  for (std::size_t k = 0; k < probe_t.size(); ++k) {
    for (std::size_t i = 0; i < probe_t[k].size; ++i) {
      double& w = probe_t[k].data[i];
      const double saved = w;
      w = saved + eps;
      const double up = StandardizedLoss(probe, data, all);
      w = saved - eps;
      const double down = StandardizedLoss(probe, data, all);
      w = saved;
      const double fd = (up - down) / (2.0 * eps);
      const double an = grad_t[k].data[i];
      const double err = std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
      ++result.entries;
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_tensor = probe_t[k].name;
      }
    }
  }
  return result;
}

SearchResult GridSearch(const Architecture& base, int x_dim, const TrainingData& data,
                        const TrainConfig& base_config, const SearchGrid& grid) {
  if (data.pool_features.empty()) Fail(ErrorCode::kEmptyScenarioSet, "grid search: empty pool");
  const int feature_dim = static_cast<int>(data.pool_features.front().size());
  SearchResult out;
  bool have = false;
  for (int hidden : grid.hidden) {
    for (double lr : grid.learning_rate) {
      for (int batch : grid.batch_size) {
        Architecture arch = base;
        arch.hidden = {hidden};
        TrainConfig cfg = base_config;
        cfg.learning_rate = lr;
        cfg.batch_size = batch;
        Rng init = Rng::ForStream(cfg.seed, {"nn", "init"});
        TrainResult r = Train(InitModel(arch, x_dim, feature_dim, init), data, cfg);
        out.trials.push_back({{"hidden", hidden},
                              {"learning_rate", lr},
                              {"batch_size", batch},
                              {"val_mae", r.val_mae},
                              {"best_epoch", r.best_epoch}});
        if (!have || r.val_mae < out.best.val_mae) {
          have = true;
          out.best = std::move(r);
          out.architecture = arch;
          out.config = cfg;
        }
      }
    }
  }
  if (!have) Fail(ErrorCode::kInvalidModel, "grid search: empty grid");
  return out;
}

bool FindPreset(std::string_view instance, Kind kind, Preset& out) {
  struct Row {
    const char* name;
    int batch;
    double lr, l1, l2;
    Optimizer opt;
    double dropout;
    int hidden, enc1, enc2, embed;
  };
  using O = Optimizer;
  static const Row kIcnn[] = {
      {"CFLP_10_10", 128, 0.00436, 0.09067, 0.02603, O::kAdam, 0.04226, 512, 512, 64, 16},
      {"CFLP_25_25", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"CFLP_50_50", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"SSLP_5_25", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"SSLP_15_45", 16, 0.04383, 0.00976, 0.0, O::kRmsprop, 0.04066, 256, 128, 16, 32},
      {"SSLP_10_50", 16, 0.02639, 0.0012, 0.0, O::kAdam, 0.02918, 512, 64, 16, 8},
      {"INVP", 32, 0.00768, 0.0, 0.0, O::kRmsprop, 0.07346, 256, 128, 64, 32},
  };
  static const Row kNn[] = {
      {"CFLP_10_10", 128, 0.00436, 0.09067, 0.02603, O::kAdam, 0.04226, 512, 512, 64, 16},
      {"CFLP_25_25", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"CFLP_50_50", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"SSLP_5_25", 128, 0.08384, 0.03226, 0.07454, O::kRmsprop, 0.00238, 512, 64, 128, 8},
      {"SSLP_15_45", 128, 0.09621, 0.02965, 0.0004, O::kAdam, 0.01053, 128, 256, 64, 64},
      {"SSLP_10_50", 128, 0.02639, 0.0012, 0.0, O::kAdam, 0.02918, 512, 64, 16, 8},
      {"INVP", 128, 0.00433, 0.005, 0.00841, O::kAdam, 0.04056, 128, 512, 128, 8},
  };
  const std::string_view key = instance.starts_with("INVP") ? std::string_view("INVP") : instance;
  for (const Row& row : kind == Kind::kIcnn ? std::span<const Row>(kIcnn) : std::span<const Row>(kNn)) {
    if (key != row.name) continue;
    out.architecture = {kind, {row.hidden}, row.enc1, row.enc2, row.embed};
    out.config = TrainConfig{};
    out.config.epochs = 2000;
    out.config.batch_size = row.batch;
    out.config.learning_rate = row.lr;
    out.config.l1_penalty = row.l1;
    out.config.l2_penalty = row.l2;
    out.config.optimizer = row.opt;
    out.config.dropout_rate = row.dropout;
    return true;
  }
  return false;
}

}  // namespace icsp::nn
