#include "icsp/embed/embedding.h"

#include <algorithm>
#include <cmath>

#include "icsp/common/error.h"
#include "icsp/lp/lp_format.h"

namespace icsp::embed {
namespace {

constexpr double kNegativeTol = 1e-12;
constexpr double kMinBigM = 1e-6;

// Copies the first stage into `mip`; returns the x columns.
std::vector<int> AddFirstStage(const sp::FirstStage& first, milp::MixedIntegerProgram& mip) {
  auto& lp = mip.base();
  std::vector<int> x(first.n());
  for (int j = 0; j < first.n(); ++j) {
    const std::string name =
        j < static_cast<int>(first.names.size()) && !first.names[j].empty() ? first.names[j]
                                                                             : "x" + std::to_string(j);
    x[j] = lp.AddVariable(first.lower[j], first.upper[j], first.c[j], name);
  }
  for (int j : first.integers) mip.MarkInteger(x[j]);
  const auto rows = first.A.RowLists();
  for (int i = 0; i < first.m(); ++i) {
    std::vector<int> idx;
    std::vector<double> val;
    for (const auto& t : rows[i]) {
      idx.push_back(x[t.col]);
      val.push_back(t.value);
    }
    lp.AddConstraint(std::move(idx), std::move(val), first.sense[i], first.b[i],
                     "fs" + std::to_string(i));
  }
  return x;
}

void CheckInput(int input_dim, const sp::FirstStage& first, std::size_t xi_size) {
  if (static_cast<std::size_t>(input_dim) != static_cast<std::size_t>(first.n()) + xi_size) {
    Fail(ErrorCode::kDimensionMismatch,
         "embed: network input " + std::to_string(input_dim) + " != " + std::to_string(first.n()) +
             " first-stage columns + " + std::to_string(xi_size) + " embedding entries");
  }
}

void CheckScale(const OutputScale& scale) {
  if (!(scale.scale > 0.0) || !std::isfinite(scale.scale) || !std::isfinite(scale.offset)) {
    Fail(ErrorCode::kInvalidModel, "embed: output scale must be positive and finite");
  }
}

// Row terms for the x part of W [x, xi] and the constant from the xi part.
struct AffineTerms {
  std::vector<int> idx;
  std::vector<double> val;
  double constant = 0.0;
};

AffineTerms InputTerms(const nn::Matrix& w, int row, const std::vector<int>& x,
                       std::span<const double> xi, double sign) {
  AffineTerms t;
  const int n = static_cast<int>(x.size());
  for (int j = 0; j < n; ++j) {
    const double a = w(row, j);
    if (a != 0.0) {
      t.idx.push_back(x[j]);
      t.val.push_back(sign * a);
    }
  }
  // Fixed product S_k xi, added in a fixed order.
  for (std::size_t j = 0; j < xi.size(); ++j) t.constant += w(row, n + static_cast<int>(j)) * xi[j];
  return t;
}

void AddTerms(AffineTerms& t, const nn::Matrix& w, int row, const std::vector<int>& cols,
              double sign) {
  for (int j = 0; j < w.cols; ++j) {
    const double a = w(row, j);
    if (a != 0.0) {
      t.idx.push_back(cols[j]);
      t.val.push_back(sign * a);
    }
  }
}

SizeSummary Summarize(const EmbeddedModel& m, int n_first, int first_integer, int hidden) {
  const auto& lp = m.program.base();
  SizeSummary s;
  s.method = m.kind == nn::Kind::kIcnn ? "ICNN" : "NN";
  s.n_integer = m.program.num_integer();
  s.n_binary = m.program.num_binary();
  s.n_continuous = lp.num_variables() - s.n_integer;
  s.n_rows = lp.num_constraints();
  s.first_stage_integer = first_integer;
  s.aux_continuous = s.n_continuous - (n_first - first_integer);
  int first_binary = 0;
  for (int j = 0; j < n_first; ++j) first_binary += m.program.is_binary(m.x_indices[j]) ? 1 : 0;
  s.aux_binary = s.n_binary - first_binary;
  s.hidden_neurons = hidden;
  return s;
}

int CountFirstStageIntegers(const sp::FirstStage& first) {
  std::vector<int> ints = first.integers;
  std::sort(ints.begin(), ints.end());
  ints.erase(std::unique(ints.begin(), ints.end()), ints.end());
  return static_cast<int>(ints.size());
}

}  // namespace

nlohmann::json ToJson(const SizeSummary& s) {
  return {{"method", s.method},
          {"continuous", s.n_continuous},
          {"integer", s.n_integer},
          {"binary", s.n_binary},
          {"rows", s.n_rows},
          {"first_stage_integer", s.first_stage_integer},
          {"aux_continuous", s.aux_continuous},
          {"aux_binary", s.aux_binary},
          {"hidden_neurons", s.hidden_neurons}};
}

EmbeddedModel EmbedIcnnLp(const nn::IcnnParams& p, std::span<const double> xi,
                          const sp::FirstStage& first, OutputScale scale) {
  CheckInput(p.input_dim(), first, xi.size());
  CheckScale(scale);
  for (std::size_t k = 1; k < p.W.size(); ++k) {
    for (double v : p.W[k].data) {
      if (v < -kNegativeTol) {
        Fail(ErrorCode::kNonNegativityViolated,
             "embed: ICNN weight W" + std::to_string(k) + " has entry " + std::to_string(v));
      }
    }
  }
  EmbeddedModel m;
  m.kind = nn::Kind::kIcnn;
  m.output_scale = scale;
  m.x_indices = AddFirstStage(first, m.program);
  auto& lp = m.program.base();
  lp.set_objective_offset(scale.offset);

  const int K = p.num_layers();
  std::vector<int> prev;  // columns of z_k
  for (int k = 0; k < K; ++k) {
    const bool output = k + 1 == K;
    std::vector<int> cols;
    for (int i = 0; i < p.dims[k + 1]; ++i) {
      const std::string name = output ? "out" : "z" + std::to_string(k + 1) + "_" + std::to_string(i);
      cols.push_back(output ? lp.AddVariable(-lp::kInf, lp::kInf, scale.scale, name)
                            : lp.AddVariable(0.0, lp::kInf, 0.0, name));
    }
    for (int i = 0; i < p.dims[k + 1]; ++i) {
      AffineTerms t = InputTerms(p.S[k], i, m.x_indices, xi, -1.0);
      if (k > 0) AddTerms(t, p.W[k], i, prev, -1.0);
      t.idx.insert(t.idx.begin(), cols[i]);
      t.val.insert(t.val.begin(), 1.0);
      lp.AddConstraint(std::move(t.idx), std::move(t.val),
                       output ? lp::RowSense::kEqual : lp::RowSense::kGreaterEqual,
                       p.b[k][i] + t.constant, (output ? "out" : "h" + std::to_string(k + 1)) +
                                                   "_" + std::to_string(i));
    }
    prev = std::move(cols);
  }
  m.output_index = prev.at(0);
  m.size = Summarize(m, first.n(), CountFirstStageIntegers(first), p.hidden_neurons());
  return m;
}

NetworkBounds PropagateBounds(const nn::ReluNetParams& p, const std::vector<Interval>& input) {
  if (static_cast<int>(input.size()) != p.input_dim()) {
    Fail(ErrorCode::kDimensionMismatch, "bounds: input has " + std::to_string(input.size()) +
                                            " intervals, network expects " +
                                            std::to_string(p.input_dim()));
  }
  for (const auto& iv : input) {
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper)) {
      Fail(ErrorCode::kUnboundedInput, "bounds: input interval is not finite");
    }
  }
  NetworkBounds out;
  std::vector<Interval> z = input;
  for (int l = 0; l + 1 < p.num_layers(); ++l) {
    std::vector<Interval> pre(p.dims[l + 1]), post(p.dims[l + 1]);
    for (int i = 0; i < p.dims[l + 1]; ++i) {
      double lo = p.b[l][i], hi = p.b[l][i];
      for (int j = 0; j < p.dims[l]; ++j) {
        const double w = p.W[l](i, j);
        if (w >= 0.0) {
          lo += w * z[j].lower;
          hi += w * z[j].upper;
        } else {
          lo += w * z[j].upper;
          hi += w * z[j].lower;
        }
      }
      pre[i] = {lo, hi};
      post[i] = {std::max(0.0, lo), std::max(0.0, hi)};
    }
    out.pre.push_back(pre);
    out.post.push_back(post);
    z = std::move(post);
  }
  return out;
}

Interval BigM(const Interval& pre) {
  return {std::min(pre.lower, -kMinBigM), std::max(pre.upper, kMinBigM)};
}

EmbeddedModel EmbedReluMip(const nn::ReluNetParams& p, std::span<const double> xi,
                           const sp::FirstStage& first, OutputScale scale) {
  CheckInput(p.input_dim(), first, xi.size());
  CheckScale(scale);
  std::vector<Interval> input;
  for (int j = 0; j < first.n(); ++j) {
    if (!std::isfinite(first.lower[j]) || !std::isfinite(first.upper[j])) {
      Fail(ErrorCode::kUnboundedInput, "embed: first-stage column " + std::to_string(j) +
                                           " has an infinite bound");
    }
    input.push_back({first.lower[j], first.upper[j]});
  }
  for (double v : xi) input.push_back({v, v});
  const NetworkBounds bounds = PropagateBounds(p, input);

  EmbeddedModel m;
  m.kind = nn::Kind::kRelu;
  m.output_scale = scale;
  m.x_indices = AddFirstStage(first, m.program);
  auto& lp = m.program.base();
  lp.set_objective_offset(scale.offset);

  const int L = p.num_layers();
  std::vector<int> prev;  // activation columns of the previous hidden layer
  for (int l = 0; l < L; ++l) {
    const bool output = l + 1 == L;
    std::vector<int> acts;
    for (int i = 0; i < p.dims[l + 1]; ++i) {
      const std::string tag = std::to_string(l + 1) + "_" + std::to_string(i);
      AffineTerms t;
      if (l == 0) {
        t = InputTerms(p.W[0], i, m.x_indices, xi, -1.0);
      } else {
        AddTerms(t, p.W[l], i, prev, -1.0);
      }
      if (output) {
        const int out = lp.AddVariable(-lp::kInf, lp::kInf, scale.scale, "out");
        t.idx.insert(t.idx.begin(), out);
        t.val.insert(t.val.begin(), 1.0);
        lp.AddConstraint(std::move(t.idx), std::move(t.val), lp::RowSense::kEqual,
                         p.b[l][i] + t.constant, "out");
        acts.push_back(out);
        continue;
      }
      const Interval M = BigM(bounds.pre[l][i]);
      const int y = lp.AddVariable(0.0, M.upper, 0.0, "y" + tag);
      const int s = lp.AddVariable(0.0, -M.lower, 0.0, "s" + tag);
      const int z = m.program.AddBinary(0.0, "b" + tag);
      t.idx.insert(t.idx.begin(), {y, s});
      t.val.insert(t.val.begin(), {1.0, -1.0});
      lp.AddConstraint(std::move(t.idx), std::move(t.val), lp::RowSense::kEqual,
                       p.b[l][i] + t.constant, "a" + tag);
      lp.AddConstraint({y, z}, {1.0, -M.upper}, lp::RowSense::kLessEqual, 0.0, "on" + tag);
      lp.AddConstraint({s, z}, {1.0, -M.lower}, lp::RowSense::kLessEqual, -M.lower, "off" + tag);
      acts.push_back(y);
    }
    prev = std::move(acts);
  }
  m.output_index = prev.at(0);
  m.size = Summarize(m, first.n(), CountFirstStageIntegers(first), p.hidden_neurons());
  return m;
}

EmbeddedModel EmbedSurrogate(const nn::SurrogateModel& model, std::span<const double> xi,
                             const sp::FirstStage& first) {
  const OutputScale scale{model.target_mean, model.target_std};
  return model.kind == nn::Kind::kIcnn ? EmbedIcnnLp(model.icnn, xi, first, scale)
                                       : EmbedReluMip(model.relu, xi, first, scale);
}

SizeSummary CountVariables(const EmbeddedModel& model) {
  int first_integer = 0;
  for (int j : model.x_indices) first_integer += model.program.is_integer(j) ? 1 : 0;
  return Summarize(model, static_cast<int>(model.x_indices.size()), first_integer,
                   model.size.hidden_neurons);
}

std::vector<double> ExtractX(const EmbeddedModel& model, const std::vector<double>& solution) {
  std::vector<double> x;
  x.reserve(model.x_indices.size());
  for (int j : model.x_indices) x.push_back(solution.at(j));
  return x;
}

std::string ToLpText(const EmbeddedModel& model) {
  return lp::ToLpFormat(model.program.base(), model.program.integer_vars());
}

}  // namespace icsp::embed
