#pragma once

#include <vector>

namespace icsp {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Coordinate-format matrix. Entries are kept sorted by (row, col) with
// duplicates summed once Canonicalize() has been called; all constructors in
// the library canonicalise before handing a matrix out.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}
  SparseMatrix(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void Add(int row, int col, double value);
  void Canonicalize();

  // y = M x
  std::vector<double> Multiply(const std::vector<double>& x) const;
  // Entries of the given row as (col, value) pairs; requires canonical order.
  std::vector<std::vector<Triplet>> RowLists() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Triplet> entries_;
};

}  // namespace icsp
