#pragma once

#include <cstdint>
#include <vector>

#include "icsp/common/rng.h"
#include "icsp/lp/linear_program.h"
#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::sp {

// Second-stage program for (x, s): rows W_s y (sense) h_s - T_s x.
lp::LinearProgram RecourseProgram(const TwoStageProblem& problem, const std::vector<double>& x,
                                  const Scenario& scenario);

// Q(x, s). Uses the simplex for continuous recourse and branch and bound
// (zero gap) when the second stage has integer columns. Throws
// Error(kRecourseInfeasible) if the second stage has no solution.
double EvaluateRecourse(const TwoStageProblem& problem, const std::vector<double>& x,
                        const Scenario& scenario);

// sum_s p_s Q(x, s).
double ExpectedRecourse(const TwoStageProblem& problem, const std::vector<double>& x,
                        const ScenarioSet& scenarios);

// Exact optimum of min c'x + E[Q(x)] for a pure-integer first stage with
// finite bounds: every integer point of the box that satisfies the
// first-stage rows is evaluated. Points with infeasible recourse are skipped;
// ties go to the first point in lexicographic order. Throws
// Error(kInvalidModel) for continuous first-stage columns and
// Error(kTooLarge) beyond `max_points` box points.
struct EnumerationResult {
  double objective = 0.0;
  std::vector<double> x;
  long points = 0;  // first-stage points evaluated
};

EnumerationResult SolveByFirstStageEnumeration(const TwoStageProblem& problem,
                                               const ScenarioSet& scenarios,
                                               long max_points = 1L << 16);

// Uniform point of the first-stage feasible set. Continuous columns are drawn
// in their (finite) bounds and projected onto equality rows; pure-binary
// first stages are drawn uniformly and repaired greedily; everything else is
// rejection sampled. With `relax_integrality` integer columns are treated as
// continuous. Throws Error(kUnboundedInput) on an infinite bound and
// Error(kInfeasibleFirstStage) if no feasible point is found.
std::vector<double> SampleFirstStage(const TwoStageProblem& problem, Rng& rng,
                                     bool relax_integrality = false);

struct ConvexityReport {
  int pairs = 0;
  int violations = 0;
  double max_violation = 0.0;
};

// Midpoint test of E[Q] over the continuous relaxation of the first-stage set:
// for random feasible x1, x2 and lambda in (0, 1) counts
// Q(lambda x1 + (1 - lambda) x2) > lambda Q(x1) + (1 - lambda) Q(x2) beyond a
// relative tolerance of 1e-6 with absolute floor 1e-8.
ConvexityReport ProbeConvexity(const TwoStageProblem& problem, const ScenarioSet& scenarios,
                               int n_pairs, std::uint64_t seed);

// Vertices of the dual region {pi : W_s' pi <= q_s, sign(pi) by row sense}
// for a continuous second stage with 0 <= y. Then
// Q(x, s) = max_k pi_k'(h_s - T_s x) whenever Q is finite. Throws
// Error(kInvalidModel) for other second-stage shapes and Error(kTooLarge)
// beyond 12 rows.
std::vector<std::vector<double>> RecourseDualVertices(const TwoStageProblem& problem,
                                                      const Scenario& scenario);

double MaxOverDualVertices(const std::vector<std::vector<double>>& vertices,
                           const TwoStageProblem& problem, const std::vector<double>& x,
                           const Scenario& scenario);

}  // namespace icsp::sp
