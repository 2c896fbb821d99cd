#include "icsp/common/sparse.h"

#include <algorithm>
#include <string>

#include "icsp/common/error.h"

namespace icsp {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  Canonicalize();
}

void SparseMatrix::Add(int row, int col, double value) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    Fail(ErrorCode::kDimensionMismatch,
         "sparse entry (" + std::to_string(row) + "," + std::to_string(col) +
             ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  entries_.push_back({row, col, value});
}

void SparseMatrix::Canonicalize() {
  for (const Triplet& t : entries_) {
    if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_) {
      Fail(ErrorCode::kDimensionMismatch, "sparse entry outside matrix shape");
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  std::vector<Triplet> merged;
  merged.reserve(entries_.size());
  for (const Triplet& t : entries_) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });
  entries_ = std::move(merged);
}

std::vector<double> SparseMatrix::Multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols_) {
    Fail(ErrorCode::kDimensionMismatch, "SparseMatrix::Multiply: vector has " +
                                            std::to_string(x.size()) + " entries, expected " +
                                            std::to_string(cols_));
  }
  std::vector<double> y(rows_, 0.0);
  for (const Triplet& t : entries_) y[t.row] += t.value * x[t.col];
  return y;
}

std::vector<std::vector<Triplet>> SparseMatrix::RowLists() const {
  std::vector<std::vector<Triplet>> rows(rows_);
  for (const Triplet& t : entries_) rows[t.row].push_back(t);
  return rows;
}

}  // namespace icsp
