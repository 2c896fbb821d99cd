#include "gomory.h"

#include <algorithm>
#include <cmath>

namespace icsp::milp::internal {

namespace {

constexpr double kMinFraction = 0.01;
constexpr double kZero = 1e-11;
constexpr double kMaxDynamism = 1e6;
constexpr double kMinEfficacy = 1e-5;

bool IsIntegral(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

}  // namespace

std::vector<Cut> GomoryMixedIntegerCuts(lp::SimplexEngine& engine, const lp::LinearProgram& lp,
                                        const std::vector<char>& is_integer) {
  const int n = lp.num_variables();
  const int m = lp.num_constraints();
  std::vector<Cut> cuts;
  std::vector<double> dense(n);
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = engine.column_value(j);

  for (int b = 0; b < n; ++b) {
    if (!is_integer[b] || engine.column_status(b) != lp::VarStatus::kBasic) continue;
    const double beta = x[b];
    const double f0 = beta - std::floor(beta);
    if (f0 < kMinFraction || f0 > 1.0 - kMinFraction) continue;
    const std::vector<double> row = engine.TableauRow(b);
    if (row.empty()) continue;

    // x_b = beta - sum g_j t_j with t_j >= 0 the distance of x_j from its bound.
    std::fill(dense.begin(), dense.end(), 0.0);
    double rhs = 1.0;
    bool usable = true;
    for (int j = 0; j < n + m && usable; ++j) {
      const double r = row[j];
      if (r == 0.0 || std::abs(r) < kZero) continue;
      const lp::VarStatus st = engine.column_status(j);
      const double lo = engine.column_lower(j);
      const double up = engine.column_upper(j);
      if (lo == up) continue;  // fixed at the root, t_j == 0
      double g;
      bool at_lower;
      if (st == lp::VarStatus::kAtLower) {
        g = r;
        at_lower = true;
      } else if (st == lp::VarStatus::kAtUpper) {
        g = -r;
        at_lower = false;
      } else {
        usable = false;  // free nonbasic
        break;
      }
      double alpha;
      const bool int_step = j < n && is_integer[j] && IsIntegral(at_lower ? lo : up);
      if (int_step) {
        const double fj = g - std::floor(g);
        alpha = fj <= f0 ? fj / f0 : (1.0 - fj) / (1.0 - f0);
      } else {
        alpha = g >= 0.0 ? g / f0 : -g / (1.0 - f0);
      }
      if (alpha == 0.0) continue;
      // alpha * t_j with t_j = x_j - lo or up - x_j; logicals expand to their row.
      const double sign = at_lower ? 1.0 : -1.0;
      rhs += sign * alpha * (at_lower ? lo : up);
      if (j < n) {
        dense[j] += sign * alpha;
      } else {
        const lp::Constraint& c = lp.constraint(j - n);
        for (std::size_t k = 0; k < c.indices.size(); ++k) {
          dense[c.indices[k]] += sign * alpha * c.coefficients[k];
        }
      }
    }
    if (!usable || !std::isfinite(rhs)) continue;

    double big = 0.0;
    for (double v : dense) big = std::max(big, std::abs(v));
    if (big <= kZero) continue;
    // Drop negligible terms by relaxing the right-hand side with the bounds.
    Cut cut;
    for (int j = 0; j < n && usable; ++j) {
      const double v = dense[j];
      if (v == 0.0) continue;
      if (std::abs(v) < big / kMaxDynamism) {
        const double bound = v > 0 ? engine.column_upper(j) : engine.column_lower(j);
        if (!std::isfinite(bound)) {
          usable = false;
          break;
        }
        rhs -= v * bound;
        continue;
      }
      cut.index.push_back(j);
      cut.coefficient.push_back(v / big);
    }
    if (!usable || cut.index.empty()) continue;
    cut.rhs = rhs / big;
    double activity = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < cut.index.size(); ++k) {
      activity += cut.coefficient[k] * x[cut.index[k]];
      norm += cut.coefficient[k] * cut.coefficient[k];
    }
    cut.efficacy = (cut.rhs - activity) / std::sqrt(norm);
    if (cut.efficacy < kMinEfficacy) continue;
    cuts.push_back(std::move(cut));
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const Cut& a, const Cut& b) { return a.efficacy > b.efficacy; });
  return cuts;
}

}  // namespace icsp::milp::internal
