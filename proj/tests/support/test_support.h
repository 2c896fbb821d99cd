#pragma once

#include <vector>

#include "icsp/common/rng.h"
#include "icsp/lp/linear_program.h"

namespace icsp::testing {

// Bounded random LP: x >= 0 (a few columns also get an upper bound), one
// all-positive <= row that caps the region, and `m - 1` further rows of
// random sense. Coefficients are small integers so vertices are well
// conditioned. The region may be empty.
lp::LinearProgram RandomBoundedLp(Rng& rng, int n, int m);

// Random vector with entries uniform on [lo, hi].
std::vector<double> RandomVector(Rng& rng, int n, double lo, double hi);

// Relative closeness with an absolute floor of 1.
bool Near(double a, double b, double tol);

}  // namespace icsp::testing

#include "icsp/milp/mixed_integer_program.h"

namespace icsp::testing {

// Random minimization MILP with `n_bin` binaries and `n_cont` bounded
// continuous columns; rows mix senses. May be infeasible.
milp::MixedIntegerProgram RandomMilp(Rng& rng, int n_bin, int n_cont, int m);

// Exhaustive oracle: enumerates every binary assignment, solving the
// remaining LP over the continuous columns when there are any. Returns +inf
// (min) / -inf (max) when nothing is feasible.
double EnumerateMilp(const milp::MixedIntegerProgram& mip);

}  // namespace icsp::testing

#include "icsp/nn/model.h"

namespace icsp::testing {

// Initialized networks with biases drawn from U(-0.5, 0.5) so that layers
// are not all centred at the origin.
nn::IcnnParams RandomIcnn(Rng& rng, int input_dim, const std::vector<int>& hidden);
nn::ReluNetParams RandomRelu(Rng& rng, int input_dim, const std::vector<int>& hidden);

}  // namespace icsp::testing

#include "icsp/nn/train.h"

namespace icsp::testing {

// Smallest |pre-activation| over every hidden unit of encoder and decoder on
// the given data. Gradient checks are only meaningful when this is not tiny.
double MinPreactivation(const nn::SurrogateModel& m, const nn::TrainingData& data);

// Eight records over a pool of six random feature vectors, subsets of size 1-4.
nn::TrainingData RandomGradData(Rng& rng, int x_dim, int feature_dim);

}  // namespace icsp::testing
