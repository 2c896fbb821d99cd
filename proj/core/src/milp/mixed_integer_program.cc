#include "icsp/milp/mixed_integer_program.h"

#include <string>

#include "icsp/common/error.h"

namespace icsp::milp {

void MixedIntegerProgram::Sync() const {
  if (static_cast<int>(is_integer_.size()) < base_.num_variables()) {
    is_integer_.resize(base_.num_variables(), 0);
  }
}

void MixedIntegerProgram::MarkInteger(int var) {
  if (var < 0 || var >= base_.num_variables()) {
    Fail(ErrorCode::kInvalidModel, "integer mark on undeclared variable " + std::to_string(var));
  }
  Sync();
  is_integer_[var] = 1;
}

void MixedIntegerProgram::MarkBinary(int var) {
  MarkInteger(var);
  base_.set_bounds(var, 0.0, 1.0);
}

int MixedIntegerProgram::AddBinary(double cost, std::string name) {
  const int j = base_.AddVariable(0.0, 1.0, cost, std::move(name));
  MarkInteger(j);
  return j;
}

int MixedIntegerProgram::AddInteger(double lower, double upper, double cost, std::string name) {
  const int j = base_.AddVariable(lower, upper, cost, std::move(name));
  MarkInteger(j);
  return j;
}

bool MixedIntegerProgram::is_binary(int var) const {
  Sync();
  return is_integer_[var] && base_.lower(var) == 0.0 && base_.upper(var) == 1.0;
}

std::vector<int> MixedIntegerProgram::integer_vars() const {
  Sync();
  std::vector<int> out;
  for (int j = 0; j < base_.num_variables(); ++j) {
    if (is_integer_[j]) out.push_back(j);
  }
  return out;
}

std::vector<int> MixedIntegerProgram::binary_vars() const {
  std::vector<int> out;
  for (int j : integer_vars()) {
    if (is_binary(j)) out.push_back(j);
  }
  return out;
}

int MixedIntegerProgram::num_integer() const { return static_cast<int>(integer_vars().size()); }
int MixedIntegerProgram::num_binary() const { return static_cast<int>(binary_vars().size()); }

void MixedIntegerProgram::Validate() const {
  base_.Validate();
  if (static_cast<int>(is_integer_.size()) > base_.num_variables()) {
    Fail(ErrorCode::kInvalidModel, "integer marks exceed the variable count");
  }
}

lp::LinearProgram LpRelaxation(const MixedIntegerProgram& mip) { return mip.base(); }

}  // namespace icsp::milp
