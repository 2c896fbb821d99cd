#pragma once

#include <vector>

#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::sp {

// One first-stage column x in [0, x_max] and the second stage
//   min q_int y_int + q_cont y_cont
//   s.t. T x + y_cont + M y_int >= h,   y_cont + U y_int <= U,
//        y_int in {0, 1},  y_cont >= 0.
// The second row switches y_cont off when y_int = 1, so that branch is
// feasible only when h - T x - M <= 0. U is chosen above every reachable
// h - T x so the recourse is relatively complete.
struct MixedIntegerExampleParams {
  double q_int = 3.0;
  double q_cont = 1.0;
  double big_m = 4.0;
  double t = 1.0;
  double x_max = 10.0;
  double h_max = 12.0;
};

TwoStageProblem MixedIntegerRecourseExample(const MixedIntegerExampleParams& params = {});

// Equal-probability scenarios with the given values of h.
ScenarioSet MixedIntegerExampleScenarios(const TwoStageProblem& problem,
                                         const std::vector<double>& h);

}  // namespace icsp::sp
