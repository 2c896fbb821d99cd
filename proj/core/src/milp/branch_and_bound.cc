#include "icsp/milp/branch_and_bound.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <queue>
#include <string>

#include "icsp/common/error.h"
#include "icsp/common/stopwatch.h"
#include "gomory.h"

namespace icsp::milp {

std::string_view ToString(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal: return "Optimal";
    case MilpStatus::kFeasible: return "Feasible";
    case MilpStatus::kInfeasible: return "Infeasible";
    case MilpStatus::kTimeLimit: return "TimeLimit";
    case MilpStatus::kUnbounded: return "Unbounded";
  }
  return "?";
}

namespace {

struct BoundChange {
  int var;
  double lower;
  double upper;
  std::shared_ptr<const BoundChange> parent;
};

struct Node {
  long id;
  int depth;
  double bound;  // minimization form
  std::shared_ptr<const BoundChange> changes;
  std::shared_ptr<const lp::Basis> warm;
};

struct NodeOrder {
  // priority_queue pops the largest element, so "less" means "worse".
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double RelativeGap(double objective, double bound) {
  return (objective - bound) / std::max(1.0, std::abs(objective));
}

}  // namespace

MilpSolution SolveMilp(const MixedIntegerProgram& mip, const MilpConfig& config) {
  mip.Validate();
  if (!(config.gap_tol >= 0.0)) Fail(ErrorCode::kInvalidModel, "gap tolerance must be >= 0");
  Stopwatch clock;
  const lp::LinearProgram& base = mip.base();
  const bool maximize = base.sense() == lp::ObjectiveSense::kMaximize;
  const double sign = maximize ? -1.0 : 1.0;
  const std::vector<int> ints = mip.integer_vars();
  const int n = base.num_variables();

  const bool has_priority = !config.branch_priority.empty();
  if (has_priority && static_cast<int>(config.branch_priority.size()) != n) {
    Fail(ErrorCode::kDimensionMismatch, "branch_priority needs one entry per variable");
  }

  lp::SimplexOptions lp_opt = config.lp_options;
  // Integer bounds are rounded inward once.
  std::vector<double> root_lo(base.lowers()), root_up(base.uppers());
  for (int j : ints) {
    root_lo[j] = std::ceil(root_lo[j] - config.integrality_tol);
    root_up[j] = std::floor(root_up[j] + config.integrality_tol);
    if (root_lo[j] > root_up[j]) {
      MilpSolution infeasible;
      infeasible.time_s = clock.ElapsedSeconds();
      return infeasible;
    }
  }
  auto make_engine = [&](const lp::LinearProgram& program) {
    lp::SimplexEngine e(program, lp_opt);
    for (int j : ints) e.SetVariableBounds(j, root_lo[j], root_up[j]);
    return e;
  };

  MilpSolution out;
  // Root cut loop. The node LPs are solved over `work`, which is `base` plus
  // the cuts; the objective and the incumbent refer to the same columns.
  lp::LinearProgram work = base;
  lp::SimplexEngine engine = make_engine(work);
  if (config.cut_rounds > 0 && !ints.empty()) {
    std::vector<char> is_int(n, 0);
    for (int j : ints) is_int[j] = 1;
    double last = -lp::kInf;
    for (int round = 0; round < config.cut_rounds; ++round) {
      lp_opt.time_limit_s = config.time_limit_s - clock.ElapsedSeconds();
      if (lp_opt.time_limit_s <= 0.0) break;
      engine.set_options(lp_opt);
      const lp::LpSolution rel = engine.Solve();
      out.lp_iterations += rel.iterations;
      if (!rel.optimal()) break;
      const double value = sign * rel.objective;
      if (round > 0 && value - last <= 1e-6 * std::max(1.0, std::abs(value))) break;
      last = value;
      std::vector<internal::Cut> cuts = internal::GomoryMixedIntegerCuts(engine, work, is_int);
      if (cuts.empty()) break;
      if (static_cast<int>(cuts.size()) > config.max_cuts_per_round) {
        cuts.resize(config.max_cuts_per_round);
      }
      lp::Basis basis = engine.SaveBasis();
      for (internal::Cut& cut : cuts) {
        work.AddConstraint(std::move(cut.index), std::move(cut.coefficient),
                           lp::RowSense::kGreaterEqual, cut.rhs);
        basis.head.push_back(static_cast<int>(basis.status.size()));
        basis.status.push_back(lp::VarStatus::kBasic);
      }
      out.cuts_added += static_cast<int>(cuts.size());
      engine = make_engine(work);
      engine.LoadBasis(basis);
    }
    // Cuts that are slack at the final root LP only slow the node LPs down.
    const int base_rows = base.num_constraints();
    if (work.num_constraints() > base_rows) {
      engine.set_options(lp_opt);
      const lp::LpSolution rel = engine.Solve();
      out.lp_iterations += rel.iterations;
      if (rel.optimal()) {
        const lp::Basis basis = engine.SaveBasis();
        lp::LinearProgram kept = base;
        std::vector<lp::VarStatus> status(basis.status.begin(), basis.status.begin() + n + base_rows);
        for (int i = base_rows; i < work.num_constraints(); ++i) {
          if (basis.status[n + i] == lp::VarStatus::kBasic) continue;
          kept.AddConstraint(work.constraint(i));
          status.push_back(basis.status[n + i]);
        }
        lp::Basis reduced{std::move(status), {}};
        for (int j = 0; j < static_cast<int>(reduced.status.size()); ++j) {
          if (reduced.status[j] == lp::VarStatus::kBasic) reduced.head.push_back(j);
        }
        work = std::move(kept);
        engine = make_engine(work);
        if (static_cast<int>(reduced.head.size()) == work.num_constraints()) {
          engine.LoadBasis(reduced);
        }
      }
    }
  }

  double incumbent = lp::kInf;  // minimization form
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{0, 0, -lp::kInf, nullptr, nullptr});
  // Depth-first stack used while diving for the first incumbent.
  std::vector<Node> dive;
  const bool diving = config.dive_until_incumbent;
  long next_id = 1;
  std::vector<int> touched;
  std::vector<char> is_touched(n, 0);
  bool stopped_by_time = false;
  bool stopped_by_nodes = false;
  double stop_bound = lp::kInf;

  auto prune_tol = [&]() {
    return std::max(1e-9, config.gap_tol * std::max(1.0, std::abs(incumbent)));
  };
  auto open_bound = [&]() {
    double b = open.empty() ? lp::kInf : open.top().bound;
    for (const Node& d : dive) b = std::min(b, d.bound);
    return b;
  };
  auto global_bound = [&](double current) {
    return std::min({current, open_bound(), incumbent});
  };
  auto log = [&](long id, double lp_value, double current) {
    if (!config.record_node_log) return;
    out.node_log.push_back(NodeLogEntry{id, sign * lp_value, sign * global_bound(current),
                                        sign * incumbent, clock.ElapsedSeconds()});
  };

  while (!open.empty() || !dive.empty()) {
    if (dive.empty() && open.top().bound >= incumbent - prune_tol()) break;  // all pruned
    if (out.node_count >= config.node_limit) {
      stopped_by_nodes = true;
      break;
    }
    const double remaining = config.time_limit_s - clock.ElapsedSeconds();
    if (remaining <= 0.0) {
      stopped_by_time = true;
      break;
    }
    Node node;
    if (!dive.empty()) {
      node = std::move(dive.back());
      dive.pop_back();
    } else {
      node = open.top();
      open.pop();
    }
    ++out.node_count;

    // Restore root bounds on previously branched columns, then apply the path.
    for (int j : touched) {
      engine.SetVariableBounds(j, root_lo[j], root_up[j]);
      is_touched[j] = 0;
    }
    touched.clear();
    std::vector<const BoundChange*> path;
    for (const BoundChange* c = node.changes.get(); c; c = c->parent.get()) path.push_back(c);
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      engine.SetVariableBounds((*it)->var, (*it)->lower, (*it)->upper);
      if (!is_touched[(*it)->var]) {
        is_touched[(*it)->var] = 1;
        touched.push_back((*it)->var);
      }
    }
    if (node.warm) engine.LoadBasis(*node.warm);

    lp_opt.time_limit_s = remaining;
    engine.set_options(lp_opt);
    const lp::LpSolution rel = engine.Solve();
    out.lp_iterations += rel.iterations;
    if (rel.status == lp::LpStatus::kIterationLimit) {
      if (clock.ElapsedSeconds() >= config.time_limit_s) {
        stopped_by_time = true;
        stop_bound = std::min(stop_bound, node.bound);
        open.push(node);
        break;
      }
      Fail(ErrorCode::kNumericalBreakdown, "node LP hit the simplex iteration limit");
    }
    if (rel.status == lp::LpStatus::kUnbounded) {
      if (node.id == 0) {
        out.status = MilpStatus::kUnbounded;
        out.time_s = clock.ElapsedSeconds();
        return out;
      }
      Fail(ErrorCode::kNumericalBreakdown, "node LP unbounded below a bounded root");
    }
    if (rel.status == lp::LpStatus::kInfeasible) {
      log(node.id, std::numeric_limits<double>::quiet_NaN(), lp::kInf);
      continue;
    }
    const double value = sign * rel.objective;
    if (value >= incumbent - prune_tol()) {
      log(node.id, value, lp::kInf);
      continue;
    }

    int branch = -1;
    double best_score = -1.0;
    int best_priority = std::numeric_limits<int>::min();
    for (int j : ints) {
      const double v = rel.primal[j];
      const double frac = v - std::floor(v);
      const double score = std::min(frac, 1.0 - frac);
      if (score <= config.integrality_tol) continue;
      const int priority = has_priority ? config.branch_priority[j] : 0;
      if (priority > best_priority || (priority == best_priority && score > best_score)) {
        best_priority = priority;
        best_score = score;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<double> x = rel.primal;
      for (int j : ints) x[j] = std::round(x[j]);
      incumbent = value;
      out.incumbent = std::move(x);
      for (Node& d : dive) open.push(std::move(d));
      dive.clear();
      log(node.id, value, lp::kInf);
      continue;
    }

    auto warm = std::make_shared<const lp::Basis>(engine.SaveBasis());
    const double v = rel.primal[branch];
    const double lo = engine.variable_lower(branch);
    const double up = engine.variable_upper(branch);
    auto down = std::make_shared<const BoundChange>(
        BoundChange{branch, lo, std::floor(v), node.changes});
    auto upc = std::make_shared<const BoundChange>(
        BoundChange{branch, std::ceil(v), up, node.changes});
    Node down_node{next_id++, node.depth + 1, value, down, warm};
    Node up_node{next_id++, node.depth + 1, value, upc, warm};
    if (diving && !std::isfinite(incumbent)) {
      // Nearest rounding is explored first.
      if (v - std::floor(v) >= 0.5) std::swap(down_node, up_node);
      dive.push_back(std::move(up_node));
      dive.push_back(std::move(down_node));
    } else {
      open.push(std::move(down_node));
      open.push(std::move(up_node));
    }
    log(node.id, value, value);
  }

  out.time_s = clock.ElapsedSeconds();
  const bool limited = stopped_by_time || stopped_by_nodes;
  if (!out.has_incumbent()) {
    if (limited && config.throw_without_incumbent) {
      Fail(ErrorCode::kNoIncumbentAtLimit,
           std::string(stopped_by_time ? "time" : "node") + " limit reached after " +
               std::to_string(out.node_count) + " nodes without an integer-feasible point");
    }
    if (limited) {
      out.status = stopped_by_time ? MilpStatus::kTimeLimit : MilpStatus::kFeasible;
      out.bound = sign * std::min(stop_bound, open_bound());
      return out;
    }
    out.status = MilpStatus::kInfeasible;
    return out;
  }
  const double bound = std::min({incumbent, stop_bound, open_bound()});
  // Recompute in original units so objective == c'x + offset exactly.
  out.objective = base.Evaluate(out.incumbent);
  out.bound = sign * bound;
  out.gap = std::max(0.0, RelativeGap(incumbent, bound));
  if (!limited || out.gap <= config.gap_tol) {
    out.status = MilpStatus::kOptimal;
  } else {
    out.status = stopped_by_time ? MilpStatus::kTimeLimit : MilpStatus::kFeasible;
  }
  return out;
}

void WriteNodeLogCsv(std::ostream& out, const std::vector<NodeLogEntry>& log) {
  out << "node,lp_bound,global_bound,incumbent,time_s\n";
  char buf[160];
  for (const NodeLogEntry& e : log) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.9f\n", e.node, e.lp_bound,
                  e.global_bound, e.incumbent, e.time_s);
    out << buf;
  }
}

double TimeToReach(const std::vector<NodeLogEntry>& log, double target, bool maximize,
                   double tol) {
  const double slack = tol * std::max(1.0, std::abs(target));
  for (const NodeLogEntry& e : log) {
    if (!std::isfinite(e.incumbent)) continue;
    if (maximize ? e.incumbent >= target - slack : e.incumbent <= target + slack) return e.time_s;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace icsp::milp
