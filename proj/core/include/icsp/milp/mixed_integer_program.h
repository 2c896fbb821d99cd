#pragma once

#include <vector>

#include "icsp/lp/linear_program.h"

namespace icsp::milp {

// A LinearProgram plus integrality marks. Binary variables are integer
// variables whose bounds are exactly [0, 1].
class MixedIntegerProgram {
 public:
  MixedIntegerProgram() = default;
  explicit MixedIntegerProgram(lp::LinearProgram base) : base_(std::move(base)) {}

  lp::LinearProgram& base() { return base_; }
  const lp::LinearProgram& base() const { return base_; }

  void MarkInteger(int var);
  // Marks integer and forces bounds to [0, 1].
  void MarkBinary(int var);
  int AddBinary(double cost, std::string name = {});
  int AddInteger(double lower, double upper, double cost, std::string name = {});

  bool is_integer(int var) const { return is_integer_[var] != 0; }
  bool is_binary(int var) const;
  // Sorted, unique.
  std::vector<int> integer_vars() const;
  std::vector<int> binary_vars() const;
  int num_integer() const;
  int num_binary() const;

  // Throws Error(kInvalidModel) if the base program or the marks are invalid.
  void Validate() const;

 private:
  void Sync() const;

  lp::LinearProgram base_;
  mutable std::vector<char> is_integer_;
};

// Same data with integrality dropped; bounds are preserved.
lp::LinearProgram LpRelaxation(const MixedIntegerProgram& mip);

}  // namespace icsp::milp
