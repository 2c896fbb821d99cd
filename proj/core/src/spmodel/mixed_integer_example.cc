#include "icsp/spmodel/mixed_integer_example.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace icsp::sp {

TwoStageProblem MixedIntegerRecourseExample(const MixedIntegerExampleParams& params) {
  TwoStageProblem p;
  p.id = "mixed-integer-recourse-example";
  p.family = "example";
  p.first.c = {0.0};
  p.first.lower = {0.0};
  p.first.upper = {params.x_max};
  p.first.names = {"x"};
  p.first.A = SparseMatrix(0, 1);

  // y = (y_int, y_cont)
  const double u = params.h_max + std::abs(params.t) * params.x_max + 1.0;
  SecondStage& s = p.second;
  s.q = {params.q_int, params.q_cont};
  s.lower = {0.0, 0.0};
  s.upper = {1.0, lp::kInf};
  s.integers = {0};
  s.W = SparseMatrix(2, 2, {{0, 0, params.big_m}, {0, 1, 1.0}, {1, 0, u}, {1, 1, 1.0}});
  s.T = SparseMatrix(2, 1, {{0, 0, params.t}});
  s.sense = {lp::RowSense::kGreaterEqual, lp::RowSense::kLessEqual};
  p.metadata = {{"q_int", params.q_int}, {"q_cont", params.q_cont}, {"M", params.big_m},
                {"U", u}, {"h_max", params.h_max}};
  return p;
}

ScenarioSet MixedIntegerExampleScenarios(const TwoStageProblem& problem,
                                         const std::vector<double>& h) {
  ScenarioSet set;
  set.id = "mixed-integer-example-scenarios";
  set.problem_id = problem.id;
  const double u = problem.metadata.at("U").get<double>();
  const double p = 1.0 / static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    Scenario s;
    s.id = "h" + std::to_string(k);
    s.probability = p;
    s.h = {h[k], u};
    s.features = {h[k]};
    set.scenarios.push_back(std::move(s));
  }
  return set;
}

}  // namespace icsp::sp
