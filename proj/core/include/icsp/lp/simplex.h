#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string_view>
#include <vector>

#include "icsp/lp/linear_program.h"

namespace icsp::lp {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view ToString(LpStatus status);

struct SimplexOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-6;
  // Ratio-test candidates with |alpha| below this are ignored.
  double pivot_tol = 1e-9;
  // Smallest pivot magnitude tolerated once Bland's rule is active.
  double breakdown_tol = 1e-12;
  int refactor_interval = 100;
  // 0 selects 20 * (rows + columns) + 10000.
  long max_iterations = 0;
  double time_limit_s = std::numeric_limits<double>::infinity();
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  // Filled only when status == kOptimal.
  std::vector<double> primal;
  std::vector<double> dual;           // one multiplier per constraint
  std::vector<double> reduced_costs;  // one per variable
  double objective = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

// Bounded-variable primal revised simplex. Dantzig pricing with Bland's rule
// taking over after 50*m consecutive degenerate pivots. Throws
// Error(kNumericalBreakdown) if no pivot above breakdown_tol exists while
// Bland's rule is active.
LpSolution SolveLp(const LinearProgram& lp, const SimplexOptions& options = {});

// b'y plus the bound terms implied by the reduced costs. Equal to the primal
// objective at an optimum (strong duality).
double DualObjective(const LinearProgram& lp, const LpSolution& solution);

enum class VarStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFreeZero };

// Basis snapshot: status of every structural and logical column plus the
// ordered list of basic columns. Logical column of row i has index n + i.
struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> head;

  bool empty() const { return head.empty() && status.empty(); }
};

// Reusable solver state over one LinearProgram. Bounds of structural columns
// may be changed between solves, and the previous (or a saved) basis is used
// as the starting point; branch and bound relies on this.
class SimplexEngine {
 public:
  explicit SimplexEngine(const LinearProgram& lp, SimplexOptions options = {});
  ~SimplexEngine();
  SimplexEngine(SimplexEngine&&) noexcept;
  SimplexEngine& operator=(SimplexEngine&&) noexcept;

  int num_variables() const;
  int num_constraints() const;

  const SimplexOptions& options() const;
  void set_options(const SimplexOptions& options);

  void SetVariableBounds(int var, double lower, double upper);
  double variable_lower(int var) const;
  double variable_upper(int var) const;

  LpSolution Solve();

  // Columns n..n+m-1 are the row logicals (row activity), see Basis.
  VarStatus column_status(int column) const;
  double column_lower(int column) const;
  double column_upper(int column) const;
  double column_value(int column) const;

  // Row of the simplex tableau for basic column `column` at the current basis:
  // x_column + sum_j row[j] x_j = 0 over all nonbasic j (structural and
  // logical). Basic entries are zero. Empty if `column` is not basic.
  std::vector<double> TableauRow(int column);

  Basis SaveBasis() const;
  void LoadBasis(const Basis& basis);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace icsp::lp
