#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icsp/common/sparse.h"
#include "icsp/lp/linear_program.h"

namespace icsp::sp {

// min c'x + E[Q(x, xi)]  s.t.  A x (sense) b,  lower <= x <= upper,  x_I integer.
struct FirstStage {
  std::vector<double> c;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> integers;
  std::vector<std::string> names;
  SparseMatrix A;
  std::vector<lp::RowSense> sense;
  std::vector<double> b;

  int n() const { return static_cast<int>(c.size()); }
  int m() const { return static_cast<int>(b.size()); }
};

// Q(x, s) = min q_s'y  s.t.  T_s x + W_s y (sense) h_s,  lower <= y <= upper,
// y_I integer. q, W and T here are the defaults that scenarios may replace.
struct SecondStage {
  std::vector<double> q;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> integers;
  SparseMatrix W;
  SparseMatrix T;
  std::vector<lp::RowSense> sense;

  int n_y() const { return static_cast<int>(q.size()); }
  int m_y() const { return static_cast<int>(sense.size()); }
};

struct TwoStageProblem {
  std::string id;
  std::string family;
  FirstStage first;
  SecondStage second;
  nlohmann::json metadata = nlohmann::json::object();

  int n() const { return first.n(); }
  bool has_integer_recourse() const { return !second.integers.empty(); }
  bool first_stage_integer(int j) const;

  // Throws Error(kDimensionMismatch) or Error(kInvalidModel).
  void Validate() const;
};

struct Scenario {
  std::string id;
  double probability = 1.0;
  std::vector<double> h;
  std::optional<std::vector<double>> q;
  std::optional<SparseMatrix> W;
  std::optional<SparseMatrix> T;
  // Raw input of the scenario encoder.
  std::vector<double> features;

  const std::vector<double>& q_or(const SecondStage& s) const { return q ? *q : s.q; }
  const SparseMatrix& W_or(const SecondStage& s) const { return W ? *W : s.W; }
  const SparseMatrix& T_or(const SecondStage& s) const { return T ? *T : s.T; }
};

struct ScenarioSet {
  std::string id;
  std::string problem_id;
  std::vector<Scenario> scenarios;
  nlohmann::json metadata = nlohmann::json::object();

  int size() const { return static_cast<int>(scenarios.size()); }
  // Probabilities in [0, 1] summing to 1 within 1e-9; consistent shapes.
  void Validate(const TwoStageProblem& problem) const;
};

// Equal-probability subset of `pool` with the given scenario indices.
ScenarioSet Subset(const ScenarioSet& pool, const std::vector<int>& indices);

// Copies every scenario so the set is listed twice, halving probabilities.
ScenarioSet Duplicate(const ScenarioSet& set);

// Rescales probabilities to sum to one.
void Normalize(ScenarioSet& set);

// Max violation of first-stage rows, bounds and integrality at x.
double FirstStageViolation(const TwoStageProblem& problem, const std::vector<double>& x,
                           bool check_integrality = true);

}  // namespace icsp::sp
