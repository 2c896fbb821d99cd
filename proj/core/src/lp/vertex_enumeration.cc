#include "icsp/lp/vertex_enumeration.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "icsp/common/error.h"
#include "icsp/lp/simplex.h"

namespace icsp::lp {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kDedupTol = 1e-9;
constexpr double kRankTol = 1e-10;

struct Hyperplane {
  std::vector<double> a;  // dense, length n
  double rhs;
};

// Solves the square system by Gaussian elimination with partial pivoting.
bool SolveSquare(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < kRankTol) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

bool Feasible(const LinearProgram& lp, const std::vector<double>& x) {
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (x[j] < lp.lower(j) - kFeasTol || x[j] > lp.upper(j) + kFeasTol) return false;
  }
  const std::vector<double> act = lp.RowActivities(x);
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& row = lp.constraint(i);
    const double tol = kFeasTol * (1.0 + std::abs(row.rhs));
    switch (row.sense) {
      case RowSense::kLessEqual:
        if (act[i] > row.rhs + tol) return false;
        break;
      case RowSense::kEqual:
        if (std::abs(act[i] - row.rhs) > tol) return false;
        break;
      case RowSense::kGreaterEqual:
        if (act[i] < row.rhs - tol) return false;
        break;
    }
  }
  return true;
}

// Recession directions d satisfy the homogeneous rows and bound signs. The
// region is unbounded iff some such d with |d_j| <= 1 has d_j != 0.
void CheckBounded(const LinearProgram& lp) {
  const int n = lp.num_variables();
  bool all_finite = true;
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower(j)) || !std::isfinite(lp.upper(j))) all_finite = false;
  }
  if (all_finite) return;

  LinearProgram feas = lp;
  for (int j = 0; j < n; ++j) feas.set_cost(j, 0.0);
  if (!SolveLp(feas).optimal()) return;  // empty region: nothing to enumerate

  LinearProgram cone;
  for (int j = 0; j < n; ++j) {
    cone.AddVariable(std::isfinite(lp.lower(j)) ? 0.0 : -1.0, std::isfinite(lp.upper(j)) ? 0.0 : 1.0,
                     0.0);
  }
  for (const Constraint& row : lp.constraints()) {
    cone.AddConstraint(row.indices, row.coefficients, row.sense, 0.0);
  }
  for (int j = 0; j < n; ++j) {
    if (cone.lower(j) == cone.upper(j)) continue;
    for (double sign : {1.0, -1.0}) {
      cone.set_cost(j, sign);
      const LpSolution s = SolveLp(cone);
      if (s.optimal() && s.objective < -1e-9) {
        Fail(ErrorCode::kUnboundedRegion,
             "feasible region is unbounded along variable " + lp.variable_name(j));
      }
    }
    cone.set_cost(j, 0.0);
  }
}

}  // namespace

void CheckSize(const LinearProgram& lp) {
  lp.Validate();
  if (lp.num_variables() > kMaxEnumerationVariables) {
    Fail(ErrorCode::kTooLarge, "vertex enumeration is limited to " +
                                   std::to_string(kMaxEnumerationVariables) + " variables, got " +
                                   std::to_string(lp.num_variables()));
  }
}

std::vector<Vertex> EnumerateVertices(const LinearProgram& lp) {
  CheckSize(lp);
  CheckBounded(lp);
  return EnumerateVerticesUnchecked(lp);
}

std::vector<Vertex> EnumerateVerticesUnchecked(const LinearProgram& lp) {
  CheckSize(lp);
  const int n = lp.num_variables();

  std::vector<Hyperplane> fixed;
  std::vector<Hyperplane> optional;
  for (const Constraint& row : lp.constraints()) {
    Hyperplane h{std::vector<double>(n, 0.0), row.rhs};
    for (std::size_t k = 0; k < row.indices.size(); ++k) h.a[row.indices[k]] = row.coefficients[k];
    (row.sense == RowSense::kEqual ? fixed : optional).push_back(std::move(h));
  }
  for (int j = 0; j < n; ++j) {
    const bool is_fixed = lp.lower(j) == lp.upper(j);
    for (double b : {lp.lower(j), lp.upper(j)}) {
      if (!std::isfinite(b)) continue;
      Hyperplane h{std::vector<double>(n, 0.0), b};
      h.a[j] = 1.0;
      (is_fixed ? fixed : optional).push_back(std::move(h));
      if (is_fixed) break;
    }
  }

  std::vector<Vertex> out;
  if (n == 0) {
    if (Feasible(lp, {})) out.push_back({{}, lp.Evaluate({})});
    return out;
  }
  const int k = n - static_cast<int>(fixed.size());
  std::vector<Hyperplane> base = fixed;
  if (k < 0) {
    // More equalities than variables: use the first independent n of them
    // and let the feasibility check reject inconsistent systems.
    base.resize(n);
  }
  const int choose = std::max(k, 0);
  const int pool = static_cast<int>(optional.size());
  if (choose > pool) return out;

  auto consider = [&](const std::vector<double>& x) {
    if (!Feasible(lp, x)) return;
    for (const Vertex& v : out) {
      bool same = true;
      for (int j = 0; j < n && same; ++j) same = std::abs(v.point[j] - x[j]) <= kDedupTol;
      if (same) return;
    }
    out.push_back({x, lp.Evaluate(x)});
  };

  std::vector<int> pick(choose);
  for (int i = 0; i < choose; ++i) pick[i] = i;
  std::vector<std::vector<double>> a(n);
  std::vector<double> b(n);
  std::vector<double> x;
  while (true) {
    int row = 0;
    for (const Hyperplane& h : base) {
      a[row] = h.a;
      b[row] = h.rhs;
      ++row;
    }
    for (int i = 0; i < choose; ++i) {
      a[row] = optional[pick[i]].a;
      b[row] = optional[pick[i]].rhs;
      ++row;
    }
    if (SolveSquare(a, b, x)) consider(x);

    int i = choose - 1;
    while (i >= 0 && pick[i] == pool - choose + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int t = i + 1; t < choose; ++t) pick[t] = pick[t - 1] + 1;
  }
  return out;
}

int BestVertex(const LinearProgram& lp, const std::vector<Vertex>& vertices) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    if (best < 0) {
      best = i;
      continue;
    }
    const double v = vertices[i].objective;
    const double w = vertices[best].objective;
    if (lp.sense() == ObjectiveSense::kMinimize ? v < w : v > w) best = i;
  }
  return best;
}

}  // namespace icsp::lp
