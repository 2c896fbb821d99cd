#include "icsp/instances/invp_exact.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "icsp/common/error.h"

namespace icsp::instances {

namespace {

// Dense copy; the matrices involved are tiny.
std::vector<std::vector<double>> Dense(const SparseMatrix& m) {
  std::vector<std::vector<double>> d(m.rows(), std::vector<double>(m.cols(), 0.0));
  for (const auto& e : m.entries()) d[e.row][e.col] += e.value;
  return d;
}

}  // namespace

ExactSolution SolveInvpExact(const sp::TwoStageProblem& problem, const sp::ScenarioSet& scenarios,
                             double max_work) {
  const auto& fs = problem.first;
  const auto& ss = problem.second;
  const int n = problem.n();
  const int ny = ss.n_y();
  if (scenarios.size() == 0) Fail(ErrorCode::kEmptyScenarioSet, "no scenarios");
  if (fs.m() != 0) Fail(ErrorCode::kInvalidModel, "exact INVP solve needs a box first stage");
  if (ss.m_y() != n) Fail(ErrorCode::kInvalidModel, "exact INVP solve needs one row per x");
  for (lp::RowSense s : ss.sense) {
    if (s != lp::RowSense::kLessEqual) Fail(ErrorCode::kInvalidModel, "exact INVP solve needs <= rows");
  }
  if (static_cast<int>(ss.integers.size()) != ny) {
    Fail(ErrorCode::kInvalidModel, "exact INVP solve needs an all-integer recourse");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(fs.lower[j]) || !std::isfinite(fs.upper[j])) {
      Fail(ErrorCode::kUnboundedInput, "exact INVP solve needs finite first-stage bounds");
    }
  }

  // Recourse patterns (odometer over the integer boxes).
  std::vector<std::vector<double>> patterns;
  {
    double count = 1.0;
    for (int k = 0; k < ny; ++k) {
      if (!std::isfinite(ss.lower[k]) || !std::isfinite(ss.upper[k])) {
        Fail(ErrorCode::kInvalidModel, "exact INVP solve needs bounded recourse");
      }
      count *= std::floor(ss.upper[k]) - std::ceil(ss.lower[k]) + 1.0;
    }
    if (count > 1e6) Fail(ErrorCode::kTooLarge, "too many recourse patterns");
    std::vector<double> y(ny);
    for (int k = 0; k < ny; ++k) y[k] = std::ceil(ss.lower[k]);
    while (true) {
      patterns.push_back(y);
      int k = ny - 1;
      while (k >= 0 && y[k] + 1.0 > std::floor(ss.upper[k])) {
        y[k] = std::ceil(ss.lower[k]);
        --k;
      }
      if (k < 0) break;
      y[k] += 1.0;
    }
  }
  const int np = static_cast<int>(patterns.size());
  const int words = (np + 63) / 64;

  // Per scenario: patterns in ascending cost, and per axis the threshold
  // x_j <= (h_j - (W y)_j) / T_jj of each pattern.
  const int S = scenarios.size();
  std::vector<std::vector<double>> cost_sorted(S);
  std::vector<std::vector<std::vector<double>>> thresholds(S);  // [s][j][rank]
  std::vector<std::vector<double>> axis(n);
  for (int j = 0; j < n; ++j) axis[j] = {fs.lower[j], fs.upper[j]};
  for (int s = 0; s < S; ++s) {
    const auto& sc = scenarios.scenarios[s];
    const auto& q = sc.q_or(ss);
    const auto W = Dense(sc.W_or(ss));
    const auto T = Dense(sc.T_or(ss));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if ((i == j && !(T[i][j] > 0.0)) || (i != j && T[i][j] != 0.0)) {
          Fail(ErrorCode::kInvalidModel, "exact INVP solve needs a positive diagonal technology");
        }
      }
    }
    std::vector<double> cost(np);
    for (int p = 0; p < np; ++p) {
      cost[p] = 0.0;
      for (int k = 0; k < ny; ++k) cost[p] += q[k] * patterns[p][k];
    }
    std::vector<int> order(np);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] < cost[b]; });
    cost_sorted[s].resize(np);
    thresholds[s].assign(n, std::vector<double>(np));
    for (int r = 0; r < np; ++r) {
      const int p = order[r];
      cost_sorted[s][r] = cost[p];
      for (int j = 0; j < n; ++j) {
        double wy = 0.0;
        for (int k = 0; k < ny; ++k) wy += W[j][k] * patterns[p][k];
        const double t = (sc.h[j] - wy) / T[j][j];
        thresholds[s][j][r] = t;
        if (t >= fs.lower[j] && t <= fs.upper[j]) axis[j].push_back(t);
      }
    }
  }
  double grid = 1.0;
  for (auto& a : axis) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    grid *= static_cast<double>(a.size());
  }
  if (grid * S * words > max_work) {
    Fail(ErrorCode::kTooLarge, "exact INVP grid needs " + std::to_string(grid * S * words) +
                                   " evaluations");
  }

  // masks[s][j][k]: patterns feasible in row j at x_j = axis[j][k].
  std::vector<std::vector<std::vector<std::uint64_t>>> masks(
      S, std::vector<std::vector<std::uint64_t>>(n));
  for (int s = 0; s < S; ++s) {
    for (int j = 0; j < n; ++j) {
      auto& m = masks[s][j];
      m.assign(axis[j].size() * words, 0);
      for (std::size_t k = 0; k < axis[j].size(); ++k) {
        for (int r = 0; r < np; ++r) {
          if (axis[j][k] <= thresholds[s][j][r]) m[k * words + r / 64] |= std::uint64_t{1} << (r % 64);
        }
      }
    }
  }

  ExactSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    ++best.candidates;
    double value = 0.0;
    for (int j = 0; j < n; ++j) value += fs.c[j] * axis[j][idx[j]];
    bool feasible = true;
    for (int s = 0; s < S && feasible; ++s) {
      int rank = -1;
      for (int w = 0; w < words && rank < 0; ++w) {
        std::uint64_t bits = ~std::uint64_t{0};
        for (int j = 0; j < n; ++j) bits &= masks[s][j][idx[j] * words + w];
        if (bits) rank = w * 64 + std::countr_zero(bits);
      }
      if (rank < 0) {
        feasible = false;
      } else {
        value += scenarios.scenarios[s].probability * cost_sorted[s][rank];
      }
    }
    if (feasible && value < best.objective) {
      best.objective = value;
      best.x.resize(n);
      for (int j = 0; j < n; ++j) best.x[j] = axis[j][idx[j]];
    }
    int j = n - 1;
    while (j >= 0 && idx[j] + 1 == axis[j].size()) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  if (!std::isfinite(best.objective)) {
    Fail(ErrorCode::kRecourseInfeasible, "no first-stage point has a feasible recourse");
  }
  return best;
}

}  // namespace icsp::instances
