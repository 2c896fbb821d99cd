#pragma once

#include "icsp/milp/mixed_integer_program.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::sp {

// Columns: x (n), then one block of n_y second-stage columns per scenario in
// set order. Objective c'x + sum_s p_s q_s'y_s; rows A x (sense) b, then
// T_s x + W_s y_s (sense) h_s per scenario. Integrality is copied from both
// stages. Throws Error(kDimensionMismatch).
milp::MixedIntegerProgram BuildExtensiveForm(const TwoStageProblem& problem,
                                             const ScenarioSet& scenarios);

inline int EfSecondStageOffset(const TwoStageProblem& problem, int scenario) {
  return problem.n() + scenario * problem.second.n_y();
}

}  // namespace icsp::sp
