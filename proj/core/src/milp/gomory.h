#pragma once

#include <vector>

#include "icsp/lp/linear_program.h"
#include "icsp/lp/simplex.h"

namespace icsp::milp::internal {

// sum coef[k] * x[index[k]] >= rhs over structural columns.
struct Cut {
  std::vector<int> index;
  std::vector<double> coefficient;
  double rhs = 0.0;
  double efficacy = 0.0;  // violation at the separated point over ||coef||
};

// Gomory mixed-integer cuts read off the optimal tableau held by `engine`,
// which must have been built from `lp` and solved to optimality. Bounds in the
// engine are taken as global, so this is only valid at the root.
std::vector<Cut> GomoryMixedIntegerCuts(lp::SimplexEngine& engine, const lp::LinearProgram& lp,
                                        const std::vector<char>& is_integer);

}  // namespace icsp::milp::internal
