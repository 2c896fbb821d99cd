#include "icsp/nn/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "icsp/common/error.h"

namespace icsp::nn {
namespace {

constexpr const char* kFormat = "icsp.model/1";

Matrix UniformMatrix(int rows, int cols, Rng& rng, bool nonnegative) {
  Matrix m(rows, cols);
  const double bound = cols > 0 ? 1.0 / std::sqrt(static_cast<double>(cols)) : 0.0;
  for (double& v : m.data) {
    v = rng.Uniform(-bound, bound);
    if (nonnegative) v = std::abs(v);
  }
  return m;
}

// y = M v (+ y), sized to M.rows.
void MatVecAdd(const Matrix& m, std::span<const double> v, std::vector<double>& y) {
  for (int r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + static_cast<std::size_t>(r) * m.cols;
    double acc = 0.0;
    for (int c = 0; c < m.cols; ++c) acc += row[c] * v[c];
    y[r] += acc;
  }
}

std::vector<double> Concat(std::span<const double> x, std::span<const double> xi) {
  std::vector<double> z(x.begin(), x.end());
  z.insert(z.end(), xi.begin(), xi.end());
  return z;
}

void CheckInput(int expected, std::size_t got, const char* what) {
  if (static_cast<std::size_t>(expected) != got) {
    Fail(ErrorCode::kDimensionMismatch, std::string(what) + ": input has " +
                                            std::to_string(got) + " entries, network expects " +
                                            std::to_string(expected));
  }
}

void Relu(std::vector<double>& v) {
  for (double& a : v) a = std::max(a, 0.0);
}

nlohmann::json MatrixJson(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix MatrixFrom(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != static_cast<std::size_t>(m.rows) * m.cols) {
    Fail(ErrorCode::kParseError, "model: matrix data does not match its shape");
  }
  return m;
}

void CheckDims(const std::vector<int>& dims, const char* what) {
  if (dims.size() < 2 || dims.back() != 1) {
    Fail(ErrorCode::kParseError, std::string(what) + ": dims must end in a scalar output");
  }
}

}  // namespace

std::string_view ToString(Kind kind) { return kind == Kind::kIcnn ? "icnn" : "relu"; }

Kind ParseKind(std::string_view name) {
  if (name == "icnn" || name == "ICNN") return Kind::kIcnn;
  if (name == "relu" || name == "ReLU" || name == "nn" || name == "NN") return Kind::kRelu;
  Fail(ErrorCode::kParseError, "unknown network kind '" + std::string(name) + "'");
}

int IcnnParams::hidden_neurons() const {
  int n = 0;
  for (std::size_t k = 1; k + 1 < dims.size(); ++k) n += dims[k];
  return n;
}

int ReluNetParams::hidden_neurons() const {
  int n = 0;
  for (std::size_t k = 1; k + 1 < dims.size(); ++k) n += dims[k];
  return n;
}

int SurrogateModel::decoder_input_dim() const {
  return kind == Kind::kIcnn ? icnn.input_dim() : relu.input_dim();
}

int SurrogateModel::hidden_neurons() const {
  return kind == Kind::kIcnn ? icnn.hidden_neurons() : relu.hidden_neurons();
}

IcnnParams InitIcnn(int input_dim, const std::vector<int>& hidden, Rng& rng) {
  IcnnParams p;
  p.dims.push_back(input_dim);
  p.dims.insert(p.dims.end(), hidden.begin(), hidden.end());
  p.dims.push_back(1);
  const int K = p.num_layers();
  p.W.resize(K);
  p.S.resize(K);
  p.b.resize(K);
  for (int k = 0; k < K; ++k) {
    if (k > 0) p.W[k] = UniformMatrix(p.dims[k + 1], p.dims[k], rng, true);
    p.S[k] = UniformMatrix(p.dims[k + 1], input_dim, rng, false);
    p.b[k].assign(p.dims[k + 1], 0.0);
  }
  return p;
}

ReluNetParams InitRelu(int input_dim, const std::vector<int>& hidden, Rng& rng) {
  ReluNetParams p;
  p.dims.push_back(input_dim);
  p.dims.insert(p.dims.end(), hidden.begin(), hidden.end());
  p.dims.push_back(1);
  const int L = p.num_layers();
  p.W.resize(L);
  p.b.resize(L);
  for (int l = 0; l < L; ++l) {
    p.W[l] = UniformMatrix(p.dims[l + 1], p.dims[l], rng, false);
    p.b[l].assign(p.dims[l + 1], 0.0);
  }
  return p;
}

EncoderParams InitEncoder(int feature_dim, int hidden1, int hidden2, int embed_dim, Rng& rng) {
  EncoderParams e;
  e.feature_dim = feature_dim;
  e.psi1_W = {UniformMatrix(hidden1, feature_dim, rng, false),
              UniformMatrix(hidden2, hidden1, rng, false)};
  e.psi1_b = {std::vector<double>(hidden1, 0.0), std::vector<double>(hidden2, 0.0)};
  e.psi2_W = UniformMatrix(embed_dim, hidden2, rng, false);
  e.psi2_b.assign(embed_dim, 0.0);
  return e;
}

SurrogateModel InitModel(const Architecture& arch, int x_dim, int feature_dim, Rng& rng) {
  SurrogateModel m;
  m.kind = arch.kind;
  m.x_dim = x_dim;
  Rng enc_rng = rng.Split("encoder");
  Rng dec_rng = rng.Split("decoder");
  m.encoder =
      InitEncoder(feature_dim, arch.encoder_hidden1, arch.encoder_hidden2, arch.embed_dim, enc_rng);
  if (arch.kind == Kind::kIcnn) {
    m.icnn = InitIcnn(x_dim + arch.embed_dim, arch.hidden, dec_rng);
  } else {
    m.relu = InitRelu(x_dim + arch.embed_dim, arch.hidden, dec_rng);
  }
  return m;
}

double ForwardIcnn(const IcnnParams& p, std::span<const double> x, std::span<const double> xi) {
  CheckInput(p.input_dim(), x.size() + xi.size(), "icnn");
  const std::vector<double> z0 = Concat(x, xi);
  const int K = p.num_layers();
  std::vector<double> z;
  for (int k = 0; k < K; ++k) {
    std::vector<double> next = p.b[k];
    if (k > 0) MatVecAdd(p.W[k], z, next);
    MatVecAdd(p.S[k], z0, next);
    if (k + 1 < K) Relu(next);
    z = std::move(next);
  }
  return z[0];
}

double ForwardRelu(const ReluNetParams& p, std::span<const double> x, std::span<const double> xi) {
  CheckInput(p.input_dim(), x.size() + xi.size(), "relu");
  std::vector<double> z = Concat(x, xi);
  const int L = p.num_layers();
  for (int l = 0; l < L; ++l) {
    std::vector<double> next = p.b[l];
    MatVecAdd(p.W[l], z, next);
    if (l + 1 < L) Relu(next);
    z = std::move(next);
  }
  return z[0];
}

std::vector<double> EncodeFeatures(const EncoderParams& enc,
                                   const std::vector<std::span<const double>>& features) {
  if (features.empty()) Fail(ErrorCode::kEmptyScenarioSet, "encoder: no scenarios");
  const int h2 = enc.psi1_W.back().rows;
  // Per-unit values are sorted before summing so the mean does not depend
  // on scenario order, bit for bit.
  std::vector<std::vector<double>> unit(h2);
  for (const auto& f : features) {
    CheckInput(enc.feature_dim, f.size(), "encoder");
    std::vector<double> z(f.begin(), f.end());
    for (std::size_t l = 0; l < enc.psi1_W.size(); ++l) {
      std::vector<double> next = enc.psi1_b[l];
      MatVecAdd(enc.psi1_W[l], z, next);
      Relu(next);
      z = std::move(next);
    }
    for (int i = 0; i < h2; ++i) unit[i].push_back(z[i]);
  }
  std::vector<double> mean(h2, 0.0);
  for (int i = 0; i < h2; ++i) {
    std::sort(unit[i].begin(), unit[i].end());
    for (double v : unit[i]) mean[i] += v;
    mean[i] /= static_cast<double>(features.size());
  }
  std::vector<double> xi = enc.psi2_b;
  MatVecAdd(enc.psi2_W, mean, xi);
  return xi;
}

std::vector<double> EncodeScenarios(const EncoderParams& enc, const sp::ScenarioSet& scenarios) {
  std::vector<std::span<const double>> features;
  features.reserve(scenarios.scenarios.size());
  for (const auto& s : scenarios.scenarios) features.emplace_back(s.features);
  return EncodeFeatures(enc, features);
}

double ForwardRaw(const SurrogateModel& model, std::span<const double> x,
                  std::span<const double> xi) {
  return model.kind == Kind::kIcnn ? ForwardIcnn(model.icnn, x, xi) : ForwardRelu(model.relu, x, xi);
}

double Predict(const SurrogateModel& model, std::span<const double> x,
               std::span<const double> xi) {
  return model.target_mean + model.target_std * ForwardRaw(model, x, xi);
}

IcnnParams ProjectNonnegative(IcnnParams p) {
  for (std::size_t k = 1; k < p.W.size(); ++k) {
    for (double& v : p.W[k].data) v = std::max(v, 0.0);
  }
  return p;
}

double MinHiddenWeight(const IcnnParams& p) {
  double lo = 0.0;
  for (std::size_t k = 1; k < p.W.size(); ++k) {
    for (double v : p.W[k].data) lo = std::min(lo, v);
  }
  return lo;
}

nlohmann::json ToJson(const SurrogateModel& model) {
  nlohmann::json enc;
  enc["feature_dim"] = model.encoder.feature_dim;
  enc["psi1"] = nlohmann::json::array();
  for (std::size_t l = 0; l < model.encoder.psi1_W.size(); ++l) {
    enc["psi1"].push_back({{"W", MatrixJson(model.encoder.psi1_W[l])},
                           {"b", model.encoder.psi1_b[l]}});
  }
  enc["psi2"] = {{"W", MatrixJson(model.encoder.psi2_W)}, {"b", model.encoder.psi2_b}};

  nlohmann::json dec;
  nlohmann::json layers = nlohmann::json::array();
  if (model.kind == Kind::kIcnn) {
    dec["dims"] = model.icnn.dims;
    for (int k = 0; k < model.icnn.num_layers(); ++k) {
      nlohmann::json layer = {{"S", MatrixJson(model.icnn.S[k])}, {"b", model.icnn.b[k]}};
      layer["W"] = k > 0 ? MatrixJson(model.icnn.W[k]) : nlohmann::json(nullptr);
      layers.push_back(std::move(layer));
    }
  } else {
    dec["dims"] = model.relu.dims;
    for (int l = 0; l < model.relu.num_layers(); ++l) {
      layers.push_back({{"W", MatrixJson(model.relu.W[l])}, {"b", model.relu.b[l]}});
    }
  }
  dec["layers"] = std::move(layers);

  return {{"format", kFormat},
          {"kind", ToString(model.kind)},
          {"x_dim", model.x_dim},
          {"target", {{"mean", model.target_mean}, {"std", model.target_std}}},
          {"encoder", std::move(enc)},
          {"decoder", std::move(dec)},
          {"metadata", model.metadata}};
}

SurrogateModel ModelFromJson(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      Fail(ErrorCode::kParseError, "model: unsupported format " + j.at("format").dump());
    }
    SurrogateModel m;
    m.kind = ParseKind(j.at("kind").get<std::string>());
    m.x_dim = j.at("x_dim").get<int>();
    m.target_mean = j.at("target").at("mean").get<double>();
    m.target_std = j.at("target").at("std").get<double>();
    if (j.contains("metadata")) m.metadata = j.at("metadata");

    const auto& enc = j.at("encoder");
    m.encoder.feature_dim = enc.at("feature_dim").get<int>();
    for (const auto& layer : enc.at("psi1")) {
      m.encoder.psi1_W.push_back(MatrixFrom(layer.at("W")));
      m.encoder.psi1_b.push_back(layer.at("b").get<std::vector<double>>());
    }
    m.encoder.psi2_W = MatrixFrom(enc.at("psi2").at("W"));
    m.encoder.psi2_b = enc.at("psi2").at("b").get<std::vector<double>>();

    const auto& dec = j.at("decoder");
    const auto dims = dec.at("dims").get<std::vector<int>>();
    CheckDims(dims, "model");
    const auto& layers = dec.at("layers");
    if (layers.size() + 1 != dims.size()) {
      Fail(ErrorCode::kParseError, "model: layer count does not match dims");
    }
    if (m.kind == Kind::kIcnn) {
      m.icnn.dims = dims;
      for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& layer = layers[k];
        m.icnn.W.push_back(k > 0 ? MatrixFrom(layer.at("W")) : Matrix());
        m.icnn.S.push_back(MatrixFrom(layer.at("S")));
        m.icnn.b.push_back(layer.at("b").get<std::vector<double>>());
      }
    } else {
      m.relu.dims = dims;
      for (const auto& layer : layers) {
        m.relu.W.push_back(MatrixFrom(layer.at("W")));
        m.relu.b.push_back(layer.at("b").get<std::vector<double>>());
      }
    }
    if (m.decoder_input_dim() != m.x_dim + m.encoder.embed_dim()) {
      Fail(ErrorCode::kParseError, "model: decoder input does not equal x_dim + embed_dim");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, std::string("model: ") + e.what());
  }
}

void SaveModel(const SurrogateModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path);
  out << ToJson(model).dump(1) << '\n';
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path);
}

SurrogateModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParseError, path + ": " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace icsp::nn
