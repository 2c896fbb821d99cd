#include "icsp/spmodel/extensive_form.h"

#include <string>

#include "icsp/common/error.h"

namespace icsp::sp {

milp::MixedIntegerProgram BuildExtensiveForm(const TwoStageProblem& problem,
                                             const ScenarioSet& scenarios) {
  problem.Validate();
  scenarios.Validate(problem);
  if (scenarios.scenarios.empty()) Fail(ErrorCode::kEmptyScenarioSet, "extensive form needs scenarios");
  const FirstStage& fs = problem.first;
  const SecondStage& ss = problem.second;
  const int n = fs.n();
  const int ny = ss.n_y();

  milp::MixedIntegerProgram mip;
  lp::LinearProgram& lp = mip.base();
  for (int j = 0; j < n; ++j) {
    lp.AddVariable(fs.lower[j], fs.upper[j], fs.c[j], fs.names.empty() ? "" : fs.names[j]);
  }
  for (int j : fs.integers) mip.MarkInteger(j);
  for (int s = 0; s < scenarios.size(); ++s) {
    const Scenario& sc = scenarios.scenarios[s];
    const std::vector<double>& q = sc.q_or(ss);
    for (int k = 0; k < ny; ++k) {
      lp.AddVariable(ss.lower[k], ss.upper[k], sc.probability * q[k],
                     "y" + std::to_string(s) + "_" + std::to_string(k));
    }
    for (int k : ss.integers) mip.MarkInteger(EfSecondStageOffset(problem, s) + k);
  }

  const auto a_rows = fs.A.RowLists();
  for (int i = 0; i < fs.m(); ++i) {
    std::vector<int> idx;
    std::vector<double> coef;
    for (const Triplet& t : a_rows[i]) {
      idx.push_back(t.col);
      coef.push_back(t.value);
    }
    lp.AddConstraint(std::move(idx), std::move(coef), fs.sense[i], fs.b[i], "a" + std::to_string(i));
  }
  for (int s = 0; s < scenarios.size(); ++s) {
    const Scenario& sc = scenarios.scenarios[s];
    const auto t_rows = sc.T_or(ss).RowLists();
    const auto w_rows = sc.W_or(ss).RowLists();
    const int off = EfSecondStageOffset(problem, s);
    for (int i = 0; i < ss.m_y(); ++i) {
      std::vector<int> idx;
      std::vector<double> coef;
      for (const Triplet& t : t_rows[i]) {
        idx.push_back(t.col);
        coef.push_back(t.value);
      }
      for (const Triplet& t : w_rows[i]) {
        idx.push_back(off + t.col);
        coef.push_back(t.value);
      }
      lp.AddConstraint(std::move(idx), std::move(coef), ss.sense[i], sc.h[i],
                       "s" + std::to_string(s) + "_" + std::to_string(i));
    }
  }
  return mip;
}

}  // namespace icsp::sp
