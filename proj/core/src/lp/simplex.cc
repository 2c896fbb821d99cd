#include "icsp/lp/simplex.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "basis_factorization.h"
#include "icsp/common/error.h"
#include "icsp/common/stopwatch.h"

namespace icsp::lp {

std::string_view ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kIterationLimit: return "IterationLimit";
  }
  return "?";
}

namespace {

constexpr double kDegenerateStep = 1e-12;

}  // namespace

// Columns 0..n-1 are the structural variables, n..n+m-1 the logicals s_i with
// A x - s = 0, so every row reads a_i x = s_i and the row sense becomes a bound
// on s_i. Costs are kept in minimization form.
struct SimplexEngine::Impl {
  int n = 0;
  int m = 0;
  SimplexOptions opt;
  bool maximize = false;
  double offset = 0.0;

  std::vector<int> col_start;
  std::vector<int> row_index;
  std::vector<double> value;

  std::vector<double> cost;
  std::vector<double> lo;
  std::vector<double> up;

  std::vector<VarStatus> status;
  std::vector<double> x;
  std::vector<int> head;
  std::vector<int> pos_of;

  internal::BasisFactorization factor;
  bool need_refactor = true;

  // scratch
  std::vector<double> col_work;
  std::vector<double> alpha;
  std::vector<double> cb;
  std::vector<double> y;
  std::vector<double> d;

  int total() const { return n + m; }

  void Build(const LinearProgram& lp) {
    lp.Validate();
    n = lp.num_variables();
    m = lp.num_constraints();
    maximize = lp.sense() == ObjectiveSense::kMaximize;
    offset = lp.objective_offset();
    const int nn = total();

    std::vector<int> count(n + 1, 0);
    for (const Constraint& row : lp.constraints()) {
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.coefficients[k] != 0.0) ++count[row.indices[k] + 1];
      }
    }
    col_start.assign(nn + 1, 0);
    for (int j = 0; j < n; ++j) col_start[j + 1] = col_start[j] + count[j + 1];
    for (int i = 0; i < m; ++i) col_start[n + i + 1] = col_start[n + i] + 1;
    row_index.assign(col_start[nn], 0);
    value.assign(col_start[nn], 0.0);
    std::vector<int> fill(col_start.begin(), col_start.begin() + n);
    for (int i = 0; i < m; ++i) {
      const Constraint& row = lp.constraint(i);
      for (std::size_t k = 0; k < row.indices.size(); ++k) {
        if (row.coefficients[k] == 0.0) continue;
        const int j = row.indices[k];
        row_index[fill[j]] = i;
        value[fill[j]] = row.coefficients[k];
        ++fill[j];
      }
      row_index[col_start[n + i]] = i;
      value[col_start[n + i]] = -1.0;
    }

    cost.assign(nn, 0.0);
    lo.assign(nn, 0.0);
    up.assign(nn, 0.0);
    for (int j = 0; j < n; ++j) {
      cost[j] = maximize ? -lp.cost(j) : lp.cost(j);
      lo[j] = lp.lower(j);
      up[j] = lp.upper(j);
    }
    for (int i = 0; i < m; ++i) {
      const Constraint& row = lp.constraint(i);
      switch (row.sense) {
        case RowSense::kLessEqual:
          lo[n + i] = -kInf;
          up[n + i] = row.rhs;
          break;
        case RowSense::kEqual:
          lo[n + i] = row.rhs;
          up[n + i] = row.rhs;
          break;
        case RowSense::kGreaterEqual:
          lo[n + i] = row.rhs;
          up[n + i] = kInf;
          break;
      }
    }

    status.assign(nn, VarStatus::kAtLower);
    x.assign(nn, 0.0);
    head.resize(m);
    pos_of.assign(nn, -1);
    for (int i = 0; i < m; ++i) {
      head[i] = n + i;
      pos_of[n + i] = i;
      status[n + i] = VarStatus::kBasic;
    }
    for (int j = 0; j < n; ++j) PlaceNonbasic(j, VarStatus::kAtLower);
    need_refactor = true;
  }

  // Puts a nonbasic column at a bound consistent with its current bounds,
  // keeping `preferred` when it is valid.
  void PlaceNonbasic(int j, VarStatus preferred) {
    VarStatus s = preferred;
    if (s == VarStatus::kBasic) s = VarStatus::kAtLower;
    if (s == VarStatus::kAtLower && !std::isfinite(lo[j])) s = VarStatus::kAtUpper;
    if (s == VarStatus::kAtUpper && !std::isfinite(up[j])) {
      s = std::isfinite(lo[j]) ? VarStatus::kAtLower : VarStatus::kFreeZero;
    }
    if (s == VarStatus::kFreeZero && (std::isfinite(lo[j]) || std::isfinite(up[j]))) {
      s = std::isfinite(lo[j]) ? VarStatus::kAtLower : VarStatus::kAtUpper;
    }
    status[j] = s;
    x[j] = s == VarStatus::kAtLower ? lo[j] : s == VarStatus::kAtUpper ? up[j] : 0.0;
  }

  void LoadColumn(int j, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) dense[row_index[k]] = value[k];
  }

  void Refactor() {
    for (int attempt = 0; attempt <= m; ++attempt) {
      std::vector<int> bs(m + 1, 0);
      std::vector<int> br;
      std::vector<double> bv;
      for (int p = 0; p < m; ++p) {
        const int j = head[p];
        for (int k = col_start[j]; k < col_start[j + 1]; ++k) {
          br.push_back(row_index[k]);
          bv.push_back(value[k]);
        }
        bs[p + 1] = static_cast<int>(br.size());
      }
      const auto repairs = factor.Factorize(m, bs, br, bv);
      if (repairs.empty()) {
        need_refactor = false;
        ComputeBasics();
        return;
      }
      for (const auto& [p, row] : repairs) {
        const int old = head[p];
        const int logical = n + row;
        pos_of[old] = -1;
        PlaceNonbasic(old, VarStatus::kAtLower);
        head[p] = logical;
        pos_of[logical] = p;
        status[logical] = VarStatus::kBasic;
      }
    }
    Fail(ErrorCode::kNumericalBreakdown, "basis repair did not converge");
  }

  void ComputeBasics() {
    std::vector<double> rhs(m, 0.0);
    for (int j = 0; j < total(); ++j) {
      if (status[j] == VarStatus::kBasic || x[j] == 0.0) continue;
      for (int k = col_start[j]; k < col_start[j + 1]; ++k) rhs[row_index[k]] -= value[k] * x[j];
    }
    std::vector<double> xb;
    factor.Ftran(rhs, xb);
    for (int p = 0; p < m; ++p) x[head[p]] = xb[p];
  }

  double Infeasibility(int j) const {
    if (x[j] < lo[j] - opt.feasibility_tol) return lo[j] - x[j];
    if (x[j] > up[j] + opt.feasibility_tol) return x[j] - up[j];
    return 0.0;
  }

  // Reduced cost of column j for the current y and phase costs.
  double ReducedCost(int j, bool phase1) const {
    double dj = phase1 ? 0.0 : cost[j];
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) dj -= value[k] * y[row_index[k]];
    return dj;
  }

  LpSolution Solve() {
    LpSolution sol;
    Stopwatch clock;
    const long max_iter =
        opt.max_iterations > 0 ? opt.max_iterations : 20L * (m + n) + 10000;
    col_work.assign(m, 0.0);
    cb.assign(m, 0.0);
    d.assign(total(), 0.0);

    long degenerate_run = 0;
    bool bland = false;
    long iter = 0;
    need_refactor = true;

    while (true) {
      if (need_refactor || factor.num_etas() >= opt.refactor_interval) Refactor();

      bool phase1 = false;
      for (int p = 0; p < m; ++p) {
        const int j = head[p];
        if (x[j] < lo[j] - opt.feasibility_tol) {
          cb[p] = -1.0;
          phase1 = true;
        } else if (x[j] > up[j] + opt.feasibility_tol) {
          cb[p] = 1.0;
          phase1 = true;
        } else {
          cb[p] = 0.0;
        }
      }
      if (!phase1) {
        for (int p = 0; p < m; ++p) cb[p] = cost[head[p]];
      }
      {
        std::vector<double> c = cb;
        factor.Btran(c, y);
      }

      // Pricing.
      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < total(); ++j) {
        const VarStatus s = status[j];
        if (s == VarStatus::kBasic) continue;
        if (lo[j] == up[j]) continue;
        const double dj = ReducedCost(j, phase1);
        d[j] = dj;
        int move = 0;
        if (s == VarStatus::kAtLower) {
          if (dj < -opt.optimality_tol) move = 1;
        } else if (s == VarStatus::kAtUpper) {
          if (dj > opt.optimality_tol) move = -1;
        } else if (std::abs(dj) > opt.optimality_tol) {
          move = dj > 0 ? -1 : 1;
        }
        if (move == 0) continue;
        if (bland) {
          q = j;
          dir = move;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
          dir = move;
        }
      }

      if (q < 0) {
        if (factor.num_etas() > 0) {
          need_refactor = true;
          continue;
        }
        sol.iterations = iter;
        if (phase1) {
          sol.status = LpStatus::kInfeasible;
          return sol;
        }
        return Finish(sol);
      }

      if (iter >= max_iter || clock.ElapsedSeconds() > opt.time_limit_s) {
        sol.status = LpStatus::kIterationLimit;
        sol.iterations = iter;
        return sol;
      }

      LoadColumn(q, col_work);
      factor.Ftran(col_work, alpha);

      // Ratio test. delta[p] is the rate of change of basic p per unit step.
      // A basic sitting just past its bound (within tolerance) caps the step
      // at 0 rather than at a negative value that would reject every row.
      const double relax = 0.1 * opt.feasibility_tol;
      double t_max = kInf;
      for (int p = 0; p < m; ++p) {
        const double a = alpha[p];
        if (std::abs(a) <= opt.pivot_tol) continue;
        const double delta = -dir * a;
        const int j = head[p];
        double bound;
        if (delta < 0) {
          if (x[j] > up[j] + opt.feasibility_tol) bound = up[j];
          else if (std::isfinite(lo[j]) && x[j] >= lo[j] - opt.feasibility_tol) bound = lo[j];
          else continue;
          t_max = std::min(t_max, std::max(0.0, (x[j] - bound + relax) / -delta));
        } else {
          if (x[j] < lo[j] - opt.feasibility_tol) bound = lo[j];
          else if (std::isfinite(up[j]) && x[j] <= up[j] + opt.feasibility_tol) bound = up[j];
          else continue;
          t_max = std::min(t_max, std::max(0.0, (bound - x[j] + relax) / delta));
        }
      }
      int r = -1;
      double t = 0.0;
      double leave_bound = 0.0;
      if (std::isfinite(t_max)) {
        double best_pivot = 0.0;
        double best_ratio = kInf;
        for (int p = 0; p < m; ++p) {
          const double a = alpha[p];
          if (std::abs(a) <= opt.pivot_tol) continue;
          const double delta = -dir * a;
          const int j = head[p];
          double bound;
          if (delta < 0) {
            if (x[j] > up[j] + opt.feasibility_tol) bound = up[j];
            else if (std::isfinite(lo[j]) && x[j] >= lo[j] - opt.feasibility_tol) bound = lo[j];
            else continue;
          } else {
            if (x[j] < lo[j] - opt.feasibility_tol) bound = lo[j];
            else if (std::isfinite(up[j]) && x[j] <= up[j] + opt.feasibility_tol) bound = up[j];
            else continue;
          }
          const double ratio = std::max(0.0, (bound - x[j]) / delta);
          if (ratio > t_max) continue;
          bool take;
          if (bland) {
            take = r < 0 || ratio < best_ratio - kDegenerateStep ||
                   (ratio <= best_ratio + kDegenerateStep && j < head[r]);
          } else {
            take = std::abs(a) > best_pivot;
          }
          if (take) {
            best_pivot = std::abs(a);
            best_ratio = ratio;
            r = p;
            t = ratio;
            leave_bound = bound;
          }
        }
      }

      const double range = up[q] - lo[q];
      if (std::isfinite(range) && (r < 0 || range <= t)) {
        // Bound flip: the entering column crosses to its other bound.
        for (int p = 0; p < m; ++p) {
          if (alpha[p] != 0.0) x[head[p]] -= dir * alpha[p] * range;
        }
        PlaceNonbasic(q, dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower);
        ++iter;
        degenerate_run = 0;
        bland = false;
        continue;
      }
      if (r < 0) {
        if (factor.num_etas() > 0) {
          need_refactor = true;
          continue;
        }
        if (phase1) {
          Fail(ErrorCode::kNumericalBreakdown,
               "phase 1 found an improving ray; the problem is badly scaled");
        }
        sol.status = LpStatus::kUnbounded;
        sol.iterations = iter;
        return sol;
      }
      if (bland && std::abs(alpha[r]) < opt.breakdown_tol) {
        Fail(ErrorCode::kNumericalBreakdown,
             "pivot magnitude " + std::to_string(std::abs(alpha[r])) + " under Bland's rule");
      }

      // Pivot.
      for (int p = 0; p < m; ++p) {
        if (alpha[p] != 0.0) x[head[p]] -= dir * alpha[p] * t;
      }
      x[q] += dir * t;
      const int leaving = head[r];
      x[leaving] = leave_bound;
      pos_of[leaving] = -1;
      if (lo[leaving] == up[leaving] || leave_bound == lo[leaving]) {
        status[leaving] = VarStatus::kAtLower;
      } else {
        status[leaving] = VarStatus::kAtUpper;
      }
      head[r] = q;
      pos_of[q] = r;
      status[q] = VarStatus::kBasic;
      factor.AddEta(r, alpha);
      ++iter;

      if (t <= kDegenerateStep) {
        if (++degenerate_run > 50L * std::max(m, 1)) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  LpSolution Finish(LpSolution& sol) {
    sol.status = LpStatus::kOptimal;
    const double sign = maximize ? -1.0 : 1.0;
    sol.primal.assign(x.begin(), x.begin() + n);
    sol.dual.resize(m);
    for (int i = 0; i < m; ++i) sol.dual[i] = sign * y[i];
    sol.reduced_costs.resize(n);
    for (int j = 0; j < n; ++j) {
      sol.reduced_costs[j] = status[j] == VarStatus::kBasic ? 0.0 : sign * ReducedCost(j, false);
    }
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += cost[j] * x[j];
    sol.objective = sign * obj + offset;
    return sol;
  }
};

SimplexEngine::SimplexEngine(const LinearProgram& lp, SimplexOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->opt = options;
  impl_->Build(lp);
}

SimplexEngine::~SimplexEngine() = default;
SimplexEngine::SimplexEngine(SimplexEngine&&) noexcept = default;
SimplexEngine& SimplexEngine::operator=(SimplexEngine&&) noexcept = default;

int SimplexEngine::num_variables() const { return impl_->n; }
int SimplexEngine::num_constraints() const { return impl_->m; }

const SimplexOptions& SimplexEngine::options() const { return impl_->opt; }
void SimplexEngine::set_options(const SimplexOptions& options) { impl_->opt = options; }

void SimplexEngine::SetVariableBounds(int var, double lower, double upper) {
  if (var < 0 || var >= impl_->n) {
    Fail(ErrorCode::kInvalidModel, "variable index " + std::to_string(var) + " out of range");
  }
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    Fail(ErrorCode::kInvalidModel, "variable bounds are not ordered");
  }
  impl_->lo[var] = lower;
  impl_->up[var] = upper;
  if (impl_->status[var] != VarStatus::kBasic) {
    impl_->PlaceNonbasic(var, impl_->status[var]);
    impl_->need_refactor = true;
  }
}

double SimplexEngine::variable_lower(int var) const { return impl_->lo[var]; }
double SimplexEngine::variable_upper(int var) const { return impl_->up[var]; }

LpSolution SimplexEngine::Solve() { return impl_->Solve(); }

VarStatus SimplexEngine::column_status(int column) const { return impl_->status[column]; }
double SimplexEngine::column_lower(int column) const { return impl_->lo[column]; }
double SimplexEngine::column_upper(int column) const { return impl_->up[column]; }
double SimplexEngine::column_value(int column) const { return impl_->x[column]; }

std::vector<double> SimplexEngine::TableauRow(int column) {
  Impl& s = *impl_;
  if (column < 0 || column >= s.total()) {
    Fail(ErrorCode::kInvalidModel, "column index out of range");
  }
  const int p = s.pos_of[column];
  if (p < 0) return {};
  if (s.need_refactor) s.Refactor();
  std::vector<double> e(s.m, 0.0), rho;
  e[p] = 1.0;
  s.factor.Btran(e, rho);
  std::vector<double> row(s.total(), 0.0);
  for (int j = 0; j < s.total(); ++j) {
    if (s.status[j] == VarStatus::kBasic) continue;
    double v = 0.0;
    for (int k = s.col_start[j]; k < s.col_start[j + 1]; ++k) v += rho[s.row_index[k]] * s.value[k];
    row[j] = v;
  }
  return row;
}

Basis SimplexEngine::SaveBasis() const { return Basis{impl_->status, impl_->head}; }

void SimplexEngine::LoadBasis(const Basis& basis) {
  Impl& s = *impl_;
  if (static_cast<int>(basis.status.size()) != s.total() ||
      static_cast<int>(basis.head.size()) != s.m) {
    Fail(ErrorCode::kDimensionMismatch, "basis does not match the program dimensions");
  }
  std::vector<int> count(s.total(), 0);
  for (int j : basis.head) {
    if (j < 0 || j >= s.total() || basis.status[j] != VarStatus::kBasic || ++count[j] > 1) {
      Fail(ErrorCode::kInvalidModel, "inconsistent basis snapshot");
    }
  }
  s.head = basis.head;
  std::fill(s.pos_of.begin(), s.pos_of.end(), -1);
  for (int p = 0; p < s.m; ++p) s.pos_of[s.head[p]] = p;
  for (int j = 0; j < s.total(); ++j) {
    if (s.pos_of[j] >= 0) {
      s.status[j] = VarStatus::kBasic;
    } else {
      s.PlaceNonbasic(j, basis.status[j]);
    }
  }
  s.need_refactor = true;
}

LpSolution SolveLp(const LinearProgram& lp, const SimplexOptions& options) {
  SimplexEngine engine(lp, options);
  return engine.Solve();
}

double DualObjective(const LinearProgram& lp, const LpSolution& solution) {
  if (!solution.optimal()) return std::numeric_limits<double>::quiet_NaN();
  const double sign = lp.sense() == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  const int n = lp.num_variables();
  // Work in minimization form: y_min = sign * dual.
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = sign * lp.cost(j);
  double value = 0.0;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    const Constraint& row = lp.constraint(i);
    const double yi = sign * solution.dual[i];
    value += yi * row.rhs;
    for (std::size_t k = 0; k < row.indices.size(); ++k) d[row.indices[k]] -= row.coefficients[k] * yi;
  }
  for (int j = 0; j < n; ++j) {
    if (d[j] == 0.0) continue;
    const double bound = d[j] > 0 ? lp.lower(j) : lp.upper(j);
    // An infinite bound with a tiny reduced cost is roundoff at a free basic.
    value += std::isfinite(bound) ? d[j] * bound : d[j] * solution.primal[j];
  }
  return sign * value + lp.objective_offset();
}

}  // namespace icsp::lp
