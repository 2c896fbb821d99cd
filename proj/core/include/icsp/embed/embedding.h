#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icsp/milp/mixed_integer_program.h"
#include "icsp/nn/model.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::embed {

// Counts by variable class. aux_* exclude the first-stage columns.
struct SizeSummary {
  std::string method;  // "ICNN" or "NN"
  int n_continuous = 0;
  int n_integer = 0;  // every integer column, binaries included
  int n_binary = 0;
  int n_rows = 0;
  int first_stage_integer = 0;
  int aux_continuous = 0;
  int aux_binary = 0;
  int hidden_neurons = 0;

  friend bool operator==(const SizeSummary&, const SizeSummary&) = default;
};

nlohmann::json ToJson(const SizeSummary& s);

// Output rescaling folded into the objective: offset + scale * network. The
// scale must be positive.
struct OutputScale {
  double offset = 0.0;
  double scale = 1.0;
};

struct EmbeddedModel {
  nn::Kind kind = nn::Kind::kIcnn;
  // An LP whenever the first stage is continuous and the network is an ICNN.
  milp::MixedIntegerProgram program;
  std::vector<int> x_indices;  // first-stage variable j lives in column x_indices[j]
  int output_index = -1;       // column holding the raw (standardized) network output
  OutputScale output_scale;
  SizeSummary size;
};

// min c'x + offset + scale * z_K over the first-stage set and
//   z_{k+1} >= W_k z_k + S_k [x, xi] + b_k,  z_{k+1} >= 0   (hidden layers)
//   z_K      = W_{K-1} z_{K-1} + S_{K-1} [x, xi] + b_{K-1}
// with the S_k xi products folded into row constants. Throws
// Error(kNonNegativityViolated) if some W_k entry is below -1e-12 and
// Error(kDimensionMismatch) on a size mismatch.
EmbeddedModel EmbedIcnnLp(const nn::IcnnParams& p, std::span<const double> xi,
                          const sp::FirstStage& first, OutputScale scale = {});

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

// Interval propagation through the hidden layers. pre[l][i] bounds
// w_i^l' y^{l-1} + b_i^l and post[l][i] its ReLU. No widening is applied.
struct NetworkBounds {
  std::vector<std::vector<Interval>> pre;
  std::vector<std::vector<Interval>> post;
};

// `input` covers the whole network input [x, xi]. Throws
// Error(kUnboundedInput) for an infinite bound and Error(kDimensionMismatch).
NetworkBounds PropagateBounds(const nn::ReluNetParams& p, const std::vector<Interval>& input);

// Big-M constants from a pre-activation interval: L <= -1e-6 and U >= 1e-6.
Interval BigM(const Interval& pre);

// Per hidden neuron: y >= 0, s >= 0, z binary with
//   y - s = w' y_prev + b,   y <= U z,   s <= -L (1 - z)
// and the output column equal to the last affine layer. Bounds come from
// PropagateBounds on the first-stage box and the fixed xi. Throws
// Error(kUnboundedInput) if a first-stage bound is infinite.
EmbeddedModel EmbedReluMip(const nn::ReluNetParams& p, std::span<const double> xi,
                           const sp::FirstStage& first, OutputScale scale = {});

// Dispatches on the model kind with the model's target normalization.
EmbeddedModel EmbedSurrogate(const nn::SurrogateModel& model, std::span<const double> xi,
                             const sp::FirstStage& first);

SizeSummary CountVariables(const EmbeddedModel& model);

// First-stage part of a solution vector of the embedded program.
std::vector<double> ExtractX(const EmbeddedModel& model, const std::vector<double>& solution);

// LP interchange text of the embedded program.
std::string ToLpText(const EmbeddedModel& model);

}  // namespace icsp::embed
