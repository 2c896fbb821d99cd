#include "test_support.h"

#include <algorithm>
#include <cmath>

namespace icsp::testing {

lp::LinearProgram RandomBoundedLp(Rng& rng, int n, int m) {
  lp::LinearProgram lp;
  for (int j = 0; j < n; ++j) {
    const double upper = rng.Bernoulli(0.2) ? static_cast<double>(rng.UniformInt(1, 6)) : lp::kInf;
    lp.AddVariable(0.0, upper, static_cast<double>(rng.UniformInt(-9, 9)));
  }
  if (rng.Bernoulli(0.5)) lp.set_sense(lp::ObjectiveSense::kMaximize);
  std::vector<int> all(n);
  for (int j = 0; j < n; ++j) all[j] = j;
  std::vector<double> cap(n);
  for (double& a : cap) a = static_cast<double>(rng.UniformInt(1, 5));
  lp.AddConstraint(all, cap, lp::RowSense::kLessEqual, static_cast<double>(rng.UniformInt(5, 30)));
  for (int i = 1; i < m; ++i) {
    std::vector<int> idx;
    std::vector<double> coef;
    for (int j = 0; j < n; ++j) {
      if (rng.Bernoulli(0.6)) {
        idx.push_back(j);
        coef.push_back(static_cast<double>(rng.UniformInt(-4, 6)));
      }
    }
    const double u = rng.Uniform();
    const lp::RowSense sense = u < 0.6   ? lp::RowSense::kLessEqual
                               : u < 0.85 ? lp::RowSense::kGreaterEqual
                                          : lp::RowSense::kEqual;
    const double rhs = sense == lp::RowSense::kLessEqual ? rng.UniformInt(0, 20)
                                                         : rng.UniformInt(-3, 4);
    lp.AddConstraint(idx, coef, sense, rhs);
  }
  return lp;
}

std::vector<double> RandomVector(Rng& rng, int n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& e : v) e = rng.Uniform(lo, hi);
  return v;
}

bool Near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace icsp::testing

#include "icsp/lp/simplex.h"

namespace icsp::testing {

milp::MixedIntegerProgram RandomMilp(Rng& rng, int n_bin, int n_cont, int m) {
  milp::MixedIntegerProgram mip;
  for (int j = 0; j < n_bin; ++j) mip.AddBinary(static_cast<double>(rng.UniformInt(-10, 10)));
  for (int j = 0; j < n_cont; ++j) {
    mip.base().AddVariable(0.0, static_cast<double>(rng.UniformInt(1, 5)),
                           rng.Uniform(-5.0, 5.0));
  }
  const int n = n_bin + n_cont;
  for (int i = 0; i < m; ++i) {
    std::vector<int> idx;
    std::vector<double> coef;
    for (int j = 0; j < n; ++j) {
      if (rng.Bernoulli(0.5)) {
        idx.push_back(j);
        coef.push_back(static_cast<double>(rng.UniformInt(-5, 8)));
      }
    }
    const bool ge = rng.Bernoulli(0.25);
    const double rhs = ge ? rng.UniformInt(-4, 3) : rng.UniformInt(2, 12);
    mip.base().AddConstraint(idx, coef, ge ? lp::RowSense::kGreaterEqual : lp::RowSense::kLessEqual,
                             rhs + (n_cont > 0 ? 0.5 : 0.0));
  }
  if (rng.Bernoulli(0.3)) mip.base().set_sense(lp::ObjectiveSense::kMaximize);
  return mip;
}

double EnumerateMilp(const milp::MixedIntegerProgram& mip) {
  const lp::LinearProgram& base = mip.base();
  const std::vector<int> bins = mip.binary_vars();
  const bool maximize = base.sense() == lp::ObjectiveSense::kMaximize;
  double best = maximize ? -lp::kInf : lp::kInf;
  const int k = static_cast<int>(bins.size());
  const int n = base.num_variables();
  bool has_continuous = n > k;
  for (long mask = 0; mask < (1L << k); ++mask) {
    lp::LinearProgram fixed = base;
    std::vector<double> x(n, 0.0);
    for (int t = 0; t < k; ++t) {
      const double v = (mask >> t) & 1 ? 1.0 : 0.0;
      fixed.set_bounds(bins[t], v, v);
      x[bins[t]] = v;
    }
    double value;
    if (has_continuous) {
      const lp::LpSolution s = lp::SolveLp(fixed);
      if (!s.optimal()) continue;
      value = s.objective;
    } else {
      if (base.MaxViolation(x) > 1e-9) continue;
      value = base.Evaluate(x);
    }
    best = maximize ? std::max(best, value) : std::min(best, value);
  }
  return best;
}

}  // namespace icsp::testing

namespace icsp::testing {

nn::IcnnParams RandomIcnn(Rng& rng, int input_dim, const std::vector<int>& hidden) {
  nn::IcnnParams p = nn::InitIcnn(input_dim, hidden, rng);
  for (auto& b : p.b) {
    for (double& v : b) v = rng.Uniform(-0.5, 0.5);
  }
  return p;
}

nn::ReluNetParams RandomRelu(Rng& rng, int input_dim, const std::vector<int>& hidden) {
  nn::ReluNetParams p = nn::InitRelu(input_dim, hidden, rng);
  for (auto& b : p.b) {
    for (double& v : b) v = rng.Uniform(-0.5, 0.5);
  }
  return p;
}

}  // namespace icsp::testing

namespace icsp::testing {

double MinPreactivation(const nn::SurrogateModel& m, const nn::TrainingData& data) {
  double lo = INFINITY;
  auto layer = [&](const nn::Matrix& W, const std::vector<double>& b, const std::vector<double>& z,
                   bool hidden) {
    std::vector<double> out = b;
    for (int r = 0; r < W.rows; ++r) {
      for (int c = 0; c < W.cols; ++c) out[r] += W(r, c) * z[c];
      if (hidden) {
        lo = std::min(lo, std::abs(out[r]));
        out[r] = std::max(out[r], 0.0);
      }
    }
    return out;
  };
  for (const auto& f : data.pool_features) {
    layer(m.encoder.psi1_W[1], m.encoder.psi1_b[1], layer(m.encoder.psi1_W[0], m.encoder.psi1_b[0], f, true),
          true);
  }
  for (const auto& r : data.records) {
    std::vector<std::span<const double>> fs;
    for (int s : r.scenarios) fs.emplace_back(data.pool_features[s]);
    std::vector<double> z0 = r.x;
    const auto xi = nn::EncodeFeatures(m.encoder, fs);
    z0.insert(z0.end(), xi.begin(), xi.end());
    if (m.kind == nn::Kind::kRelu) {
      std::vector<double> z = z0;
      for (int l = 0; l + 1 < m.relu.num_layers(); ++l) z = layer(m.relu.W[l], m.relu.b[l], z, true);
    } else {
      std::vector<double> z;
      for (int k = 0; k + 1 < m.icnn.num_layers(); ++k) {
        auto pre = layer(m.icnn.S[k], m.icnn.b[k], z0, false);
        if (k > 0) {
          const auto wz = layer(m.icnn.W[k], std::vector<double>(pre.size(), 0.0), z, false);
          for (std::size_t i = 0; i < pre.size(); ++i) pre[i] += wz[i];
        }
        for (double& v : pre) {
          lo = std::min(lo, std::abs(v));
          v = std::max(v, 0.0);
        }
        z = pre;
      }
    }
  }
  return lo;
}

nn::TrainingData RandomGradData(Rng& rng, int x_dim, int feature_dim) {
  nn::TrainingData data;
  for (int i = 0; i < 6; ++i) data.pool_features.push_back(RandomVector(rng, feature_dim, -1.0, 1.0));
  for (int i = 0; i < 8; ++i) {
    nn::TrainingRecord r;
    r.x = RandomVector(rng, x_dim, -1, 1);
    r.scenarios = rng.SampleWithoutReplacement(6, 1 + i % 4);
    r.label = rng.Uniform(-1, 1);
    data.records.push_back(r);
  }
  return data;
}

}  // namespace icsp::testing
