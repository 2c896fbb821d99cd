#include "icsp/spmodel/two_stage_problem.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "icsp/common/error.h"

namespace icsp::sp {
namespace {

void CheckShape(const SparseMatrix& m, int rows, int cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols) {
    Fail(ErrorCode::kDimensionMismatch, what + " is " + std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()) + ", expected " +
                                            std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void CheckLength(std::size_t got, int want, const std::string& what) {
  if (static_cast<int>(got) != want) {
    Fail(ErrorCode::kDimensionMismatch, what + " has length " + std::to_string(got) +
                                            ", expected " + std::to_string(want));
  }
}

void CheckBounds(const std::vector<double>& lo, const std::vector<double>& up,
                 const std::string& what) {
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (std::isnan(lo[j]) || std::isnan(up[j]) || lo[j] > up[j]) {
      Fail(ErrorCode::kInvalidModel, what + " bounds of column " + std::to_string(j) +
                                         " are not ordered");
    }
  }
}

void CheckIndices(const std::vector<int>& idx, int n, const std::string& what) {
  for (int j : idx) {
    if (j < 0 || j >= n) {
      Fail(ErrorCode::kInvalidModel, what + " index " + std::to_string(j) + " out of range");
    }
  }
}

}  // namespace

bool TwoStageProblem::first_stage_integer(int j) const {
  return std::find(first.integers.begin(), first.integers.end(), j) != first.integers.end();
}

void TwoStageProblem::Validate() const {
  const int n = first.n();
  CheckLength(first.lower.size(), n, "first-stage lower");
  CheckLength(first.upper.size(), n, "first-stage upper");
  if (!first.names.empty()) CheckLength(first.names.size(), n, "first-stage names");
  CheckBounds(first.lower, first.upper, "first-stage");
  CheckIndices(first.integers, n, "first-stage integer");
  CheckLength(first.sense.size(), first.m(), "first-stage senses");
  CheckShape(first.A, first.m(), n, "A");

  const int ny = second.n_y();
  const int my = second.m_y();
  CheckLength(second.lower.size(), ny, "second-stage lower");
  CheckLength(second.upper.size(), ny, "second-stage upper");
  CheckBounds(second.lower, second.upper, "second-stage");
  CheckIndices(second.integers, ny, "second-stage integer");
  CheckShape(second.W, my, ny, "W");
  CheckShape(second.T, my, n, "T");
}

void ScenarioSet::Validate(const TwoStageProblem& problem) const {
  const int my = problem.second.m_y();
  double total = 0.0;
  std::size_t feature_dim = scenarios.empty() ? 0 : scenarios.front().features.size();
  for (const Scenario& s : scenarios) {
    if (!(s.probability >= 0.0 && s.probability <= 1.0)) {
      Fail(ErrorCode::kInvalidModel, "scenario " + s.id + " probability outside [0, 1]");
    }
    total += s.probability;
    CheckLength(s.h.size(), my, "scenario " + s.id + " h");
    if (s.q) CheckLength(s.q->size(), problem.second.n_y(), "scenario " + s.id + " q");
    if (s.W) CheckShape(*s.W, my, problem.second.n_y(), "scenario " + s.id + " W");
    if (s.T) CheckShape(*s.T, my, problem.n(), "scenario " + s.id + " T");
    if (s.features.size() != feature_dim) {
      Fail(ErrorCode::kDimensionMismatch, "scenario feature vectors differ in length");
    }
  }
  if (!scenarios.empty() && std::abs(total - 1.0) > 1e-9) {
    Fail(ErrorCode::kInvalidModel, "scenario probabilities sum to " + std::to_string(total));
  }
}

ScenarioSet Subset(const ScenarioSet& pool, const std::vector<int>& indices) {
  ScenarioSet out;
  out.id = pool.id + "/subset";
  out.problem_id = pool.problem_id;
  out.metadata = pool.metadata;
  const double p = indices.empty() ? 0.0 : 1.0 / static_cast<double>(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= pool.size()) {
      Fail(ErrorCode::kInvalidModel, "scenario index " + std::to_string(i) + " not in pool");
    }
    Scenario s = pool.scenarios[i];
    s.probability = p;
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

ScenarioSet Duplicate(const ScenarioSet& set) {
  ScenarioSet out = set;
  out.id = set.id + "/dup";
  out.scenarios.clear();
  for (int copy = 0; copy < 2; ++copy) {
    for (const Scenario& s : set.scenarios) {
      Scenario d = s;
      d.probability = s.probability / 2.0;
      if (copy == 1) d.id += "'";
      out.scenarios.push_back(std::move(d));
    }
  }
  return out;
}

void Normalize(ScenarioSet& set) {
  double total = 0.0;
  for (const Scenario& s : set.scenarios) total += s.probability;
  if (total <= 0.0) Fail(ErrorCode::kInvalidModel, "scenario probabilities sum to zero");
  for (Scenario& s : set.scenarios) s.probability /= total;
}

double FirstStageViolation(const TwoStageProblem& problem, const std::vector<double>& x,
                           bool check_integrality) {
  CheckLength(x.size(), problem.n(), "first-stage point");
  double worst = 0.0;
  for (int j = 0; j < problem.n(); ++j) {
    worst = std::max({worst, problem.first.lower[j] - x[j], x[j] - problem.first.upper[j]});
  }
  if (check_integrality) {
    for (int j : problem.first.integers) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  const std::vector<double> ax = problem.first.A.Multiply(x);
  for (int i = 0; i < problem.first.m(); ++i) {
    const double r = ax[i] - problem.first.b[i];
    switch (problem.first.sense[i]) {
      case lp::RowSense::kLessEqual: worst = std::max(worst, r); break;
      case lp::RowSense::kEqual: worst = std::max(worst, std::abs(r)); break;
      case lp::RowSense::kGreaterEqual: worst = std::max(worst, -r); break;
    }
  }
  return worst;
}

}  // namespace icsp::sp
