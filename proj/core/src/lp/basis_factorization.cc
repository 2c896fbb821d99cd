#include "basis_factorization.h"

#include <algorithm>
#include <cmath>

namespace icsp::lp::internal {
namespace {

constexpr double kSingletonTol = 1e-11;
constexpr double kNucleusPivotTol = 1e-11;
constexpr double kEtaDropTol = 1e-14;

}  // namespace

std::vector<std::pair<int, int>> BasisFactorization::Factorize(
    int m, const std::vector<int>& col_start, const std::vector<int>& rows,
    const std::vector<double>& vals) {
  m_ = m;
  col_start_ = col_start;
  rows_ = rows;
  vals_ = vals;
  etas_.clear();
  row_singletons_.clear();
  col_singletons_.clear();

  // Row-wise pattern (positions per row).
  std::vector<int> row_start(m + 1, 0);
  for (int r : rows_) ++row_start[r + 1];
  for (int i = 0; i < m; ++i) row_start[i + 1] += row_start[i];
  std::vector<int> row_pos(rows_.size());
  {
    std::vector<int> fill(row_start.begin(), row_start.end() - 1);
    for (int p = 0; p < m; ++p) {
      for (int k = col_start_[p]; k < col_start_[p + 1]; ++k) row_pos[fill[rows_[k]]++] = p;
    }
  }

  std::vector<int> row_count(m), col_count(m);
  std::vector<char> row_active(m, 1), col_active(m, 1);
  for (int i = 0; i < m; ++i) row_count[i] = row_start[i + 1] - row_start[i];
  for (int p = 0; p < m; ++p) col_count[p] = col_start_[p + 1] - col_start_[p];

  auto entry_value = [&](int p, int row) {
    for (int k = col_start_[p]; k < col_start_[p + 1]; ++k) {
      if (rows_[k] == row) return vals_[k];
    }
    return 0.0;
  };
  auto deactivate = [&](int row, int pos) {
    row_active[row] = 0;
    col_active[pos] = 0;
    for (int k = row_start[row]; k < row_start[row + 1]; ++k) --col_count[row_pos[k]];
    for (int k = col_start_[pos]; k < col_start_[pos + 1]; ++k) --row_count[rows_[k]];
  };

  // Row singletons.
  std::vector<int> queue;
  for (int i = 0; i < m; ++i) {
    if (row_count[i] == 1) queue.push_back(i);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int i = queue[head];
    if (!row_active[i] || row_count[i] != 1) continue;
    int pos = -1;
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      if (col_active[row_pos[k]]) {
        pos = row_pos[k];
        break;
      }
    }
    if (pos < 0) continue;
    const double v = entry_value(pos, i);
    if (std::abs(v) < kSingletonTol) continue;
    row_singletons_.push_back({i, pos, v});
    deactivate(i, pos);
    for (int k = col_start_[pos]; k < col_start_[pos + 1]; ++k) {
      const int r = rows_[k];
      if (row_active[r] && row_count[r] == 1) queue.push_back(r);
    }
  }

  // Column singletons.
  queue.clear();
  for (int p = 0; p < m; ++p) {
    if (col_active[p] && col_count[p] == 1) queue.push_back(p);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int p = queue[head];
    if (!col_active[p] || col_count[p] != 1) continue;
    int row = -1;
    double v = 0.0;
    for (int k = col_start_[p]; k < col_start_[p + 1]; ++k) {
      if (row_active[rows_[k]]) {
        row = rows_[k];
        v = vals_[k];
        break;
      }
    }
    if (row < 0 || std::abs(v) < kSingletonTol) continue;
    col_singletons_.push_back({row, p, v});
    deactivate(row, p);
    for (int k = row_start[row]; k < row_start[row + 1]; ++k) {
      const int q = row_pos[k];
      if (col_active[q] && col_count[q] == 1) queue.push_back(q);
    }
  }

  // Dense nucleus on whatever is left.
  nucleus_rows_.clear();
  nucleus_pos_.clear();
  nucleus_row_local_.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    if (row_active[i]) {
      nucleus_row_local_[i] = static_cast<int>(nucleus_rows_.size());
      nucleus_rows_.push_back(i);
    }
  }
  for (int p = 0; p < m; ++p) {
    if (col_active[p]) nucleus_pos_.push_back(p);
  }
  const int k = static_cast<int>(nucleus_rows_.size());
  nucleus_k_ = k;
  lu_.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int j = 0; j < k; ++j) {
    const int p = nucleus_pos_[j];
    for (int e = col_start_[p]; e < col_start_[p + 1]; ++e) {
      const int local = nucleus_row_local_[rows_[e]];
      if (local >= 0) lu_[static_cast<std::size_t>(local) * k + j] = vals_[e];
    }
  }

  // Right-looking elimination with partial (row) pivoting. lu_[r][c] holds the
  // U entry for pivot rows (c >= step) and the L multiplier otherwise.
  pivot_order_.clear();
  std::vector<char> pivoted(k, 0);
  std::vector<int> dependent_cols;
  for (int j = 0; j < k; ++j) {
    int best = -1;
    double best_abs = kNucleusPivotTol;
    for (int r = 0; r < k; ++r) {
      if (pivoted[r]) continue;
      const double a = std::abs(lu_[static_cast<std::size_t>(r) * k + j]);
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best < 0) {
      dependent_cols.push_back(j);
      continue;
    }
    pivoted[best] = 1;
    pivot_order_.push_back(best);
    double* pivot_row = &lu_[static_cast<std::size_t>(best) * k];
    const double piv = pivot_row[j];
    for (int r = 0; r < k; ++r) {
      if (pivoted[r]) continue;
      double* row = &lu_[static_cast<std::size_t>(r) * k];
      const double mult = row[j] / piv;
      row[j] = mult;
      if (mult == 0.0) continue;
      for (int c = j + 1; c < k; ++c) row[c] -= mult * pivot_row[c];
    }
  }

  // Anything structurally or numerically uncovered becomes a repair request.
  std::vector<std::pair<int, int>> repairs;
  if (!dependent_cols.empty()) {
    std::vector<int> free_rows;
    for (int r = 0; r < k; ++r) {
      if (!pivoted[r]) free_rows.push_back(nucleus_rows_[r]);
    }
    for (std::size_t t = 0; t < dependent_cols.size() && t < free_rows.size(); ++t) {
      repairs.emplace_back(nucleus_pos_[dependent_cols[t]], free_rows[t]);
    }
  }
  work_.assign(std::max(k, 1), 0.0);
  return repairs;
}

void BasisFactorization::BaseFtran(std::vector<double>& a, std::vector<double>& w) const {
  w.assign(m_, 0.0);
  for (const Pivot& pv : row_singletons_) {
    const double xp = a[pv.row] / pv.value;
    w[pv.pos] = xp;
    if (xp == 0.0) continue;
    for (int e = col_start_[pv.pos]; e < col_start_[pv.pos + 1]; ++e) a[rows_[e]] -= vals_[e] * xp;
  }
  const int k = nucleus_k_;
  if (k > 0) {
    std::vector<double>& b = work_;
    for (int r = 0; r < k; ++r) b[r] = a[nucleus_rows_[r]];
    for (int j = 0; j < k; ++j) {
      const double bj = b[pivot_order_[j]];
      if (bj == 0.0) continue;
      for (int t = j + 1; t < k; ++t) {
        const int r = pivot_order_[t];
        b[r] -= lu_[static_cast<std::size_t>(r) * k + j] * bj;
      }
    }
    // Back substitution; reuse a separate buffer for the solution.
    std::vector<double> sol(k, 0.0);
    for (int j = k - 1; j >= 0; --j) {
      const int r = pivot_order_[j];
      const double* row = &lu_[static_cast<std::size_t>(r) * k];
      double s = b[r];
      for (int c = j + 1; c < k; ++c) s -= row[c] * sol[c];
      sol[j] = s / row[j];
    }
    for (int j = 0; j < k; ++j) {
      const int p = nucleus_pos_[j];
      w[p] = sol[j];
      if (sol[j] == 0.0) continue;
      for (int e = col_start_[p]; e < col_start_[p + 1]; ++e) a[rows_[e]] -= vals_[e] * sol[j];
    }
  }
  for (auto it = col_singletons_.rbegin(); it != col_singletons_.rend(); ++it) {
    const double xp = a[it->row] / it->value;
    w[it->pos] = xp;
    if (xp == 0.0) continue;
    for (int e = col_start_[it->pos]; e < col_start_[it->pos + 1]; ++e) a[rows_[e]] -= vals_[e] * xp;
  }
}

void BasisFactorization::BaseBtran(std::vector<double>& c, std::vector<double>& y) const {
  y.assign(m_, 0.0);
  auto solve_pivot = [&](const Pivot& pv) {
    double s = c[pv.pos];
    for (int e = col_start_[pv.pos]; e < col_start_[pv.pos + 1]; ++e) {
      if (rows_[e] != pv.row) s -= vals_[e] * y[rows_[e]];
    }
    y[pv.row] = s / pv.value;
  };
  for (const Pivot& pv : col_singletons_) solve_pivot(pv);
  const int k = nucleus_k_;
  if (k > 0) {
    std::vector<double> rhs(k);
    for (int j = 0; j < k; ++j) {
      const int p = nucleus_pos_[j];
      double s = c[p];
      for (int e = col_start_[p]; e < col_start_[p + 1]; ++e) s -= vals_[e] * y[rows_[e]];
      rhs[j] = s;
    }
    // U' z = rhs (forward), then L' ytilde = z (backward).
    std::vector<double> z(k);
    for (int j = 0; j < k; ++j) {
      double s = rhs[j];
      for (int i = 0; i < j; ++i) s -= lu_[static_cast<std::size_t>(pivot_order_[i]) * k + j] * z[i];
      z[j] = s / lu_[static_cast<std::size_t>(pivot_order_[j]) * k + j];
    }
    for (int t = k - 1; t >= 0; --t) {
      double s = z[t];
      for (int u = t + 1; u < k; ++u) {
        s -= lu_[static_cast<std::size_t>(pivot_order_[u]) * k + t] * z[u];
      }
      z[t] = s;
    }
    for (int t = 0; t < k; ++t) y[nucleus_rows_[pivot_order_[t]]] = z[t];
  }
  for (auto it = row_singletons_.rbegin(); it != row_singletons_.rend(); ++it) solve_pivot(*it);
}

void BasisFactorization::Ftran(std::vector<double>& a, std::vector<double>& w) const {
  BaseFtran(a, w);
  for (const Eta& eta : etas_) {
    const double wp = w[eta.pos] / eta.pivot;
    w[eta.pos] = wp;
    if (wp == 0.0) continue;
    for (std::size_t t = 0; t < eta.index.size(); ++t) w[eta.index[t]] -= eta.value[t] * wp;
  }
}

void BasisFactorization::Btran(std::vector<double>& c, std::vector<double>& y) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = c[it->pos];
    for (std::size_t t = 0; t < it->index.size(); ++t) s -= c[it->index[t]] * it->value[t];
    c[it->pos] = s / it->pivot;
  }
  BaseBtran(c, y);
}

void BasisFactorization::AddEta(int pos, const std::vector<double>& alpha) {
  Eta eta;
  eta.pos = pos;
  eta.pivot = alpha[pos];
  for (int i = 0; i < m_; ++i) {
    if (i != pos && std::abs(alpha[i]) > kEtaDropTol) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

}  // namespace icsp::lp::internal
