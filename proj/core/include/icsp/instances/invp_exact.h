#pragma once

#include <vector>

#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::instances {

struct ExactSolution {
  double objective = 0.0;
  std::vector<double> x;
  long candidates = 0;  // first-stage points evaluated
};

// Exact extensive-form optimum for problems shaped like INVP: a box first
// stage without rows, a diagonal technology matrix with positive entries,
// <= rows, nonnegative W and a bounded integer recourse. Each Q(., s) is then
// a nondecreasing step function whose steps sit at
// (h_si - (W y)_i) / T_ii, so the optimum lies on the grid of those values
// and the bounds. Ties go to the lexicographically smallest x. Throws
// Error(kInvalidModel) for other shapes and Error(kTooLarge) when the grid
// exceeds `max_work` scenario evaluations.
ExactSolution SolveInvpExact(const sp::TwoStageProblem& problem, const sp::ScenarioSet& scenarios,
                             double max_work = 5e9);

}  // namespace icsp::instances
