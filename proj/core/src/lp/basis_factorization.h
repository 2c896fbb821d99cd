#pragma once

#include <utility>
#include <vector>

namespace icsp::lp::internal {

// LU factorization of a simplex basis B (m x m, columns indexed by basis
// position). Row and column singletons are peeled off first, which for the
// block-angular bases produced by extensive forms and network-like recourse
// leaves a small nucleus that is factorized densely with partial pivoting.
// Basis changes are applied as product-form eta updates until the next
// refactorization.
class BasisFactorization {
 public:
  // Column p of B is given by (rows[col_start[p]..col_start[p+1]), vals[...]).
  // Returns (position, row) pairs for dependent columns together with rows left
  // without a pivot; empty on success.
  std::vector<std::pair<int, int>> Factorize(int m, const std::vector<int>& col_start,
                                             const std::vector<int>& rows,
                                             const std::vector<double>& vals);

  // Solves B w = a. `a` (indexed by row) is consumed as workspace; `w` is
  // indexed by basis position.
  void Ftran(std::vector<double>& a, std::vector<double>& w) const;
  // Solves B' y = c. `c` (indexed by position) is consumed; `y` by row.
  void Btran(std::vector<double>& c, std::vector<double>& y) const;

  // Records the basis change that replaces position `pos` by a column whose
  // Ftran image is `alpha`.
  void AddEta(int pos, const std::vector<double>& alpha);

  int num_etas() const { return static_cast<int>(etas_.size()); }
  int nucleus_size() const { return nucleus_k_; }

 private:
  struct Pivot {
    int row;
    int pos;
    double value;
  };
  struct Eta {
    int pos;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  void BaseFtran(std::vector<double>& a, std::vector<double>& w) const;
  void BaseBtran(std::vector<double>& c, std::vector<double>& y) const;

  int m_ = 0;
  std::vector<int> col_start_;
  std::vector<int> rows_;
  std::vector<double> vals_;

  std::vector<Pivot> row_singletons_;  // solved first, in order
  std::vector<Pivot> col_singletons_;  // solved last, in reverse order

  int nucleus_k_ = 0;
  std::vector<int> nucleus_rows_;       // local row -> global row
  std::vector<int> nucleus_pos_;        // local col -> basis position
  std::vector<int> nucleus_row_local_;  // global row -> local row or -1
  std::vector<int> pivot_order_;        // step j -> local row pivoted at j
  std::vector<double> lu_;              // k x k row-major, see Factorize

  std::vector<Eta> etas_;
  mutable std::vector<double> work_;
};

}  // namespace icsp::lp::internal
