#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "icsp/common/rng.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::nn {

// Dense row-major matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  bool empty() const { return data.empty(); }
  friend bool operator==(const Matrix&, const Matrix&) = default;
};

enum class Kind { kIcnn, kRelu };

std::string_view ToString(Kind kind);
Kind ParseKind(std::string_view name);

// Input convex network over z0 = [x, xi] with K = dims.size() - 1 layers:
//   z1 = relu(S0 z0 + b0)
//   z_{k+1} = relu(W_k z_k + S_k z0 + b_k),   k = 1..K-2
//   out = W_{K-1} z_{K-1} + S_{K-1} z0 + b_{K-1}
// dims[0] is the input size, dims[K] == 1. W[0] is empty; W[k] is
// dims[k+1] x dims[k] and element-wise non-negative; S[k] is dims[k+1] x dims[0].
struct IcnnParams {
  std::vector<int> dims;
  std::vector<Matrix> W;
  std::vector<Matrix> S;
  std::vector<std::vector<double>> b;

  int num_layers() const { return static_cast<int>(dims.size()) - 1; }
  int input_dim() const { return dims.empty() ? 0 : dims[0]; }
  int hidden_neurons() const;
  friend bool operator==(const IcnnParams&, const IcnnParams&) = default;
};

// Plain MLP with ReLU hidden layers and a linear scalar output.
// W[l] is dims[l+1] x dims[l].
struct ReluNetParams {
  std::vector<int> dims;
  std::vector<Matrix> W;
  std::vector<std::vector<double>> b;

  int num_layers() const { return static_cast<int>(dims.size()) - 1; }
  int input_dim() const { return dims.empty() ? 0 : dims[0]; }
  int hidden_neurons() const;
  friend bool operator==(const ReluNetParams&, const ReluNetParams&) = default;
};

// Deep-set scenario encoder: psi1 (two ReLU layers) applied per scenario,
// unweighted mean over the set, then psi2 (one linear layer).
struct EncoderParams {
  int feature_dim = 0;
  std::vector<Matrix> psi1_W;
  std::vector<std::vector<double>> psi1_b;
  Matrix psi2_W;
  std::vector<double> psi2_b;

  int embed_dim() const { return psi2_W.rows; }
  friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

// Trained surrogate of the expected recourse:
//   Q(x, S) ~ target_mean + target_std * net([x, encoder(S)]).
struct SurrogateModel {
  Kind kind = Kind::kIcnn;
  int x_dim = 0;
  EncoderParams encoder;
  IcnnParams icnn;     // used when kind == kIcnn
  ReluNetParams relu;  // used when kind == kRelu
  double target_mean = 0.0;
  double target_std = 1.0;
  nlohmann::json metadata = nlohmann::json::object();

  int decoder_input_dim() const;
  int hidden_neurons() const;
  friend bool operator==(const SurrogateModel&, const SurrogateModel&) = default;
};

struct Architecture {
  Kind kind = Kind::kIcnn;
  std::vector<int> hidden;  // decoder hidden layer widths
  int encoder_hidden1 = 64;
  int encoder_hidden2 = 32;
  int embed_dim = 16;
};

// Kaiming-style uniform init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)); the ICNN
// W_k take absolute values of their draws so training starts feasible.
// Biases start at zero.
IcnnParams InitIcnn(int input_dim, const std::vector<int>& hidden, Rng& rng);
ReluNetParams InitRelu(int input_dim, const std::vector<int>& hidden, Rng& rng);
EncoderParams InitEncoder(int feature_dim, int hidden1, int hidden2, int embed_dim, Rng& rng);
SurrogateModel InitModel(const Architecture& arch, int x_dim, int feature_dim, Rng& rng);

// Throws Error(kDimensionMismatch) if the input sizes are wrong.
double ForwardIcnn(const IcnnParams& p, std::span<const double> x, std::span<const double> xi);
double ForwardRelu(const ReluNetParams& p, std::span<const double> x, std::span<const double> xi);

// Throws Error(kEmptyScenarioSet) for an empty set.
std::vector<double> EncodeFeatures(const EncoderParams& enc,
                                   const std::vector<std::span<const double>>& features);
std::vector<double> EncodeScenarios(const EncoderParams& enc, const sp::ScenarioSet& scenarios);

// Network output in standardized units and in original units.
double ForwardRaw(const SurrogateModel& model, std::span<const double> x,
                  std::span<const double> xi);
double Predict(const SurrogateModel& model, std::span<const double> x, std::span<const double> xi);

// Clamps every W_k (k >= 1) at zero; S and b are left alone.
IcnnParams ProjectNonnegative(IcnnParams p);
// Most negative W_k entry, 0 if there is none.
double MinHiddenWeight(const IcnnParams& p);

// Model file, format "icsp.model/1". Weights are row-major arrays.
nlohmann::json ToJson(const SurrogateModel& model);
SurrogateModel ModelFromJson(const nlohmann::json& j);
void SaveModel(const SurrogateModel& model, const std::string& path);
SurrogateModel LoadModel(const std::string& path);

}  // namespace icsp::nn
