#pragma once

#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

#include "icsp/lp/simplex.h"
#include "icsp/milp/mixed_integer_program.h"

namespace icsp::milp {

enum class MilpStatus { kOptimal, kFeasible, kInfeasible, kTimeLimit, kUnbounded };

std::string_view ToString(MilpStatus status);

struct MilpConfig {
  // Relative gap (objective - bound) / max(1, |objective|) at which the search stops.
  double gap_tol = 1e-6;
  long node_limit = std::numeric_limits<long>::max();
  double time_limit_s = std::numeric_limits<double>::infinity();
  double integrality_tol = 1e-6;
  bool record_node_log = false;
  // Rounds of Gomory mixed-integer cuts added at the root before branching.
  // 0 keeps plain branch and bound.
  int cut_rounds = 0;
  int max_cuts_per_round = 200;
  // Depth-first plunging (nearest rounding first) until the first incumbent,
  // best-bound afterwards.
  bool dive_until_incumbent = false;
  // When false, hitting a limit without an incumbent returns kTimeLimit or
  // kFeasible with an empty incumbent and the proven bound instead of throwing.
  bool throw_without_incumbent = true;
  // Optional per-variable branching priority: fractional variables of the
  // highest priority are branched on first, most-fractional within a class.
  std::vector<int> branch_priority;
  lp::SimplexOptions lp_options;
};

struct NodeLogEntry {
  long node = 0;
  double lp_bound = 0.0;      // LP value of this node (NaN if infeasible)
  double global_bound = 0.0;  // best bound over the open tree after the node
  double incumbent = 0.0;     // +inf (min) / -inf (max) before the first one
  double time_s = 0.0;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> incumbent;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  long node_count = 0;
  long lp_iterations = 0;
  int cuts_added = 0;
  double time_s = 0.0;
  std::vector<NodeLogEntry> node_log;

  bool has_incumbent() const { return !incumbent.empty(); }
};

// LP-based branch and bound: best-bound node selection (ties: deeper first,
// then older), most-fractional branching with ties to the lowest index, no
// primal heuristics and, unless cut_rounds > 0, no cuts. Child nodes warm
// start from the parent's final basis. Status kFeasible means the node limit stopped the search and
// kTimeLimit the time limit; both carry the incumbent. Throws
// Error(kNoIncumbentAtLimit) if a limit hits before any integer point.
MilpSolution SolveMilp(const MixedIntegerProgram& mip, const MilpConfig& config = {});

void WriteNodeLogCsv(std::ostream& out, const std::vector<NodeLogEntry>& log);

// First time at which the incumbent reached `target` (within `tol`, in the
// direction of the objective sense), or NaN if it never did.
double TimeToReach(const std::vector<NodeLogEntry>& log, double target, bool maximize,
                   double tol = 1e-6);

}  // namespace icsp::milp
