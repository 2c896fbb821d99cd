#include "icsp/spmodel/recourse.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "icsp/common/error.h"
#include "icsp/lp/simplex.h"
#include "icsp/lp/vertex_enumeration.h"
#include "icsp/milp/branch_and_bound.h"

namespace icsp::sp {
namespace {

constexpr int kMaxSampleAttempts = 10000;
constexpr double kSampleFeasTol = 1e-9;

std::string FormatPoint(const std::vector<double>& x) {
  std::string out = "[";
  for (std::size_t j = 0; j < x.size() && j < 8; ++j) {
    if (j) out += ", ";
    out += std::to_string(x[j]);
  }
  if (x.size() > 8) out += ", ...";
  return out + "]";
}

bool IsBinaryColumn(const FirstStage& fs, int j, const std::vector<char>& is_int) {
  return is_int[j] && fs.lower[j] == 0.0 && fs.upper[j] == 1.0;
}

// Solves the dense k x k system in place; false if singular.
bool DenseSolve(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const int k = static_cast<int>(b.size());
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-12) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (int t = c; t < k; ++t) a[r][t] -= f * a[c][t];
      b[r] -= f * b[c];
    }
  }
  for (int c = 0; c < k; ++c) b[c] /= a[c][c];
  return true;
}

// Orthogonal projection of the non-fixed columns onto the equality rows.
void ProjectOntoEqualities(const FirstStage& fs, const std::vector<char>& movable,
                           std::vector<double>& x) {
  const auto rows = fs.A.RowLists();
  std::vector<int> eq;
  for (int i = 0; i < fs.m(); ++i) {
    if (fs.sense[i] == lp::RowSense::kEqual) eq.push_back(i);
  }
  if (eq.empty()) return;
  const int k = static_cast<int>(eq.size());
  std::vector<double> resid(k);
  std::vector<std::vector<double>> gram(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> dense(k, std::vector<double>(fs.n(), 0.0));
  for (int r = 0; r < k; ++r) {
    double ax = 0.0;
    for (const Triplet& t : rows[eq[r]]) {
      ax += t.value * x[t.col];
      if (movable[t.col]) dense[r][t.col] = t.value;
    }
    resid[r] = ax - fs.b[eq[r]];
  }
  for (int r = 0; r < k; ++r) {
    for (int s = 0; s < k; ++s) {
      double g = 0.0;
      for (int j = 0; j < fs.n(); ++j) g += dense[r][j] * dense[s][j];
      gram[r][s] = g;
    }
  }
  if (!DenseSolve(gram, resid)) return;
  for (int j = 0; j < fs.n(); ++j) {
    if (!movable[j]) continue;
    double step = 0.0;
    for (int r = 0; r < k; ++r) step += dense[r][j] * resid[r];
    x[j] -= step;
  }
}

// Greedy repair of a binary point: flips columns in random order until each
// violated row is satisfied or no helpful flip remains.
void RepairBinary(const FirstStage& fs, Rng& rng, std::vector<double>& x) {
  const auto rows = fs.A.RowLists();
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (int i = 0; i < fs.m(); ++i) {
      double ax = 0.0;
      for (const Triplet& t : rows[i]) ax += t.value * x[t.col];
      const double excess = ax - fs.b[i];
      const lp::RowSense sense = fs.sense[i];
      const bool too_high = excess > kSampleFeasTol && sense != lp::RowSense::kGreaterEqual;
      const bool too_low = excess < -kSampleFeasTol && sense != lp::RowSense::kLessEqual;
      if (!too_high && !too_low) continue;
      std::vector<Triplet> order = rows[i];
      rng.Shuffle(order);
      double current = ax;
      for (const Triplet& t : order) {
        const double delta = x[t.col] == 1.0 ? -t.value : t.value;
        const bool helps = too_high ? delta < 0 : delta > 0;
        if (!helps) continue;
        // Stop flipping once the row is satisfied; never overshoot an equality.
        const double next = current + delta;
        if (sense == lp::RowSense::kEqual && (too_high ? next < fs.b[i] : next > fs.b[i])) continue;
        x[t.col] = 1.0 - x[t.col];
        current = next;
        changed = true;
        if (too_high ? current <= fs.b[i] + kSampleFeasTol : current >= fs.b[i] - kSampleFeasTol) {
          break;
        }
      }
    }
    if (!changed) break;
  }
}

}  // namespace

lp::LinearProgram RecourseProgram(const TwoStageProblem& problem, const std::vector<double>& x,
                                  const Scenario& scenario) {
  const SecondStage& ss = problem.second;
  if (static_cast<int>(x.size()) != problem.n()) {
    Fail(ErrorCode::kDimensionMismatch, "first-stage point has length " +
                                            std::to_string(x.size()) + ", expected " +
                                            std::to_string(problem.n()));
  }
  const std::vector<double> tx = scenario.T_or(ss).Multiply(x);
  const std::vector<double>& q = scenario.q_or(ss);
  lp::LinearProgram lp;
  for (int k = 0; k < ss.n_y(); ++k) lp.AddVariable(ss.lower[k], ss.upper[k], q[k]);
  const auto w_rows = scenario.W_or(ss).RowLists();
  for (int i = 0; i < ss.m_y(); ++i) {
    std::vector<int> idx;
    std::vector<double> coef;
    for (const Triplet& t : w_rows[i]) {
      idx.push_back(t.col);
      coef.push_back(t.value);
    }
    lp.AddConstraint(std::move(idx), std::move(coef), ss.sense[i], scenario.h[i] - tx[i]);
  }
  return lp;
}

double EvaluateRecourse(const TwoStageProblem& problem, const std::vector<double>& x,
                        const Scenario& scenario) {
  lp::LinearProgram lp = RecourseProgram(problem, x, scenario);
  if (!problem.has_integer_recourse()) {
    const lp::LpSolution s = lp::SolveLp(lp);
    if (s.optimal()) return s.objective;
    Fail(ErrorCode::kRecourseInfeasible,
         "second stage of scenario " + scenario.id + " is " + std::string(lp::ToString(s.status)) +
             " at x = " + FormatPoint(x));
  }
  milp::MixedIntegerProgram mip(std::move(lp));
  for (int k : problem.second.integers) mip.MarkInteger(k);
  milp::MilpConfig cfg;
  cfg.gap_tol = 0.0;
  const milp::MilpSolution s = milp::SolveMilp(mip, cfg);
  if (s.status == milp::MilpStatus::kOptimal) return s.objective;
  Fail(ErrorCode::kRecourseInfeasible,
       "second stage of scenario " + scenario.id + " is " + std::string(milp::ToString(s.status)) +
           " at x = " + FormatPoint(x));
}

double ExpectedRecourse(const TwoStageProblem& problem, const std::vector<double>& x,
                        const ScenarioSet& scenarios) {
  double total = 0.0;
  for (const Scenario& s : scenarios.scenarios) total += s.probability * EvaluateRecourse(problem, x, s);
  return total;
}

EnumerationResult SolveByFirstStageEnumeration(const TwoStageProblem& problem,
                                               const ScenarioSet& scenarios, long max_points) {
  const FirstStage& fs = problem.first;
  const int n = fs.n();
  if (static_cast<int>(fs.integers.size()) != n) {
    Fail(ErrorCode::kInvalidModel, "first-stage enumeration needs an all-integer first stage");
  }
  double count = 1.0;
  std::vector<double> lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(fs.lower[j]) || !std::isfinite(fs.upper[j])) {
      Fail(ErrorCode::kUnboundedInput, "first-stage enumeration needs finite bounds");
    }
    lo[j] = std::ceil(fs.lower[j]);
    hi[j] = std::floor(fs.upper[j]);
    count *= std::max(0.0, hi[j] - lo[j] + 1.0);
  }
  if (count > static_cast<double>(max_points)) {
    Fail(ErrorCode::kTooLarge, "first-stage box has " + std::to_string(count) + " points");
  }
  EnumerationResult best;
  best.objective = lp::kInf;
  std::vector<double> x = lo;
  while (count > 0.0) {
    if (FirstStageViolation(problem, x) <= 1e-9) {
      ++best.points;
      try {
        double value = 0.0;
        for (int j = 0; j < n; ++j) value += fs.c[j] * x[j];
        value += ExpectedRecourse(problem, x, scenarios);
        if (value < best.objective) {
          best.objective = value;
          best.x = x;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kRecourseInfeasible) throw;
      }
    }
    int j = n - 1;
    while (j >= 0 && x[j] + 1.0 > hi[j]) {
      x[j] = lo[j];
      --j;
    }
    if (j < 0) break;
    x[j] += 1.0;
  }
  if (best.x.empty()) {
    Fail(ErrorCode::kRecourseInfeasible, "no first-stage point has a feasible recourse");
  }
  return best;
}

std::vector<double> SampleFirstStage(const TwoStageProblem& problem, Rng& rng,
                                     bool relax_integrality) {
  const FirstStage& fs = problem.first;
  const int n = fs.n();
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(fs.lower[j]) || !std::isfinite(fs.upper[j])) {
      Fail(ErrorCode::kUnboundedInput, "sampling needs finite first-stage bounds");
    }
  }
  std::vector<char> is_int(n, 0);
  if (!relax_integrality) {
    for (int j : fs.integers) is_int[j] = 1;
  }
  bool pure_binary = n > 0;
  for (int j = 0; j < n; ++j) pure_binary = pure_binary && IsBinaryColumn(fs, j, is_int);
  std::vector<char> movable(n);
  for (int j = 0; j < n; ++j) movable[j] = !is_int[j];

  std::vector<double> x(n);
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    for (int j = 0; j < n; ++j) {
      if (is_int[j]) {
        x[j] = static_cast<double>(rng.UniformInt(static_cast<std::int64_t>(std::ceil(fs.lower[j])),
                                                  static_cast<std::int64_t>(std::floor(fs.upper[j]))));
      } else {
        x[j] = fs.lower[j] == fs.upper[j] ? fs.lower[j] : rng.Uniform(fs.lower[j], fs.upper[j]);
      }
    }
    if (pure_binary) {
      RepairBinary(fs, rng, x);
    } else {
      ProjectOntoEqualities(fs, movable, x);
    }
    if (FirstStageViolation(problem, x, !relax_integrality) <= kSampleFeasTol) return x;
  }
  Fail(ErrorCode::kInfeasibleFirstStage, "no feasible first-stage point found after " +
                                             std::to_string(kMaxSampleAttempts) + " draws");
}

ConvexityReport ProbeConvexity(const TwoStageProblem& problem, const ScenarioSet& scenarios,
                               int n_pairs, std::uint64_t seed) {
  ConvexityReport report;
  Rng rng = Rng::ForStream(seed, {"probe_convexity", problem.id});
  for (int k = 0; k < n_pairs; ++k) {
    const std::vector<double> x1 = SampleFirstStage(problem, rng, true);
    const std::vector<double> x2 = SampleFirstStage(problem, rng, true);
    double lambda = rng.Uniform();
    while (lambda <= 0.0) lambda = rng.Uniform();
    std::vector<double> xm(x1.size());
    for (std::size_t j = 0; j < xm.size(); ++j) xm[j] = lambda * x1[j] + (1.0 - lambda) * x2[j];
    if (FirstStageViolation(problem, xm, false) > kSampleFeasTol) continue;
    ++report.pairs;
    const double q1 = ExpectedRecourse(problem, x1, scenarios);
    const double q2 = ExpectedRecourse(problem, x2, scenarios);
    const double qm = ExpectedRecourse(problem, xm, scenarios);
    const double chord = lambda * q1 + (1.0 - lambda) * q2;
    const double excess = qm - chord;
    const double tol = std::max(1e-8, 1e-6 * std::max(std::abs(qm), std::abs(chord)));
    if (excess > tol) {
      ++report.violations;
      report.max_violation = std::max(report.max_violation, excess);
    }
  }
  return report;
}

std::vector<std::vector<double>> RecourseDualVertices(const TwoStageProblem& problem,
                                                      const Scenario& scenario) {
  const SecondStage& ss = problem.second;
  if (problem.has_integer_recourse()) {
    Fail(ErrorCode::kInvalidModel, "dual representation needs a continuous second stage");
  }
  for (int k = 0; k < ss.n_y(); ++k) {
    if (ss.lower[k] != 0.0 || std::isfinite(ss.upper[k])) {
      Fail(ErrorCode::kInvalidModel, "dual representation needs 0 <= y without upper bounds");
    }
  }
  lp::LinearProgram dual;
  for (int i = 0; i < ss.m_y(); ++i) {
    switch (ss.sense[i]) {
      case lp::RowSense::kGreaterEqual: dual.AddVariable(0.0, lp::kInf, 0.0); break;
      case lp::RowSense::kLessEqual: dual.AddVariable(-lp::kInf, 0.0, 0.0); break;
      case lp::RowSense::kEqual: dual.AddVariable(-lp::kInf, lp::kInf, 0.0); break;
    }
  }
  std::vector<std::vector<int>> idx(ss.n_y());
  std::vector<std::vector<double>> coef(ss.n_y());
  for (const Triplet& t : scenario.W_or(ss).entries()) {
    idx[t.col].push_back(t.row);
    coef[t.col].push_back(t.value);
  }
  const std::vector<double>& q = scenario.q_or(ss);
  for (int k = 0; k < ss.n_y(); ++k) {
    dual.AddConstraint(idx[k], coef[k], lp::RowSense::kLessEqual, q[k]);
  }
  std::vector<std::vector<double>> out;
  for (const lp::Vertex& v : lp::EnumerateVerticesUnchecked(dual)) out.push_back(v.point);
  return out;
}

double MaxOverDualVertices(const std::vector<std::vector<double>>& vertices,
                           const TwoStageProblem& problem, const std::vector<double>& x,
                           const Scenario& scenario) {
  const std::vector<double> tx = scenario.T_or(problem.second).Multiply(x);
  double best = -lp::kInf;
  for (const auto& pi : vertices) {
    double v = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) v += pi[i] * (scenario.h[i] - tx[i]);
    best = std::max(best, v);
  }
  return best;
}

}  // namespace icsp::sp
