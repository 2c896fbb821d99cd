#include "icsp/lp/linear_program.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "icsp/common/error.h"

namespace icsp::lp {

const char* RowSenseSymbol(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kEqual: return "=";
    case RowSense::kGreaterEqual: return ">=";
  }
  return "?";
}

int LinearProgram::AddVariable(double lower, double upper, double cost, std::string name) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    Fail(ErrorCode::kInvalidModel, "variable bounds [" + std::to_string(lower) + ", " +
                                       std::to_string(upper) + "] are not ordered");
  }
  if (!std::isfinite(cost)) Fail(ErrorCode::kInvalidModel, "non-finite objective coefficient");
  const int index = num_variables();
  costs_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  names_.push_back(name.empty() ? "x" + std::to_string(index) : std::move(name));
  return index;
}

int LinearProgram::AddConstraint(Constraint constraint) {
  if (constraint.indices.size() != constraint.coefficients.size()) {
    Fail(ErrorCode::kInvalidModel, "constraint index/coefficient length mismatch");
  }
  std::vector<int> sorted = constraint.indices;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= num_variables()) {
      Fail(ErrorCode::kInvalidModel,
           "constraint references undeclared variable " + std::to_string(sorted[k]));
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      Fail(ErrorCode::kInvalidModel, "constraint repeats variable " + std::to_string(sorted[k]));
    }
  }
  for (double a : constraint.coefficients) {
    if (!std::isfinite(a)) Fail(ErrorCode::kInvalidModel, "non-finite constraint coefficient");
  }
  if (std::isnan(constraint.rhs)) Fail(ErrorCode::kInvalidModel, "NaN right-hand side");
  const int index = num_constraints();
  if (constraint.name.empty()) constraint.name = "r" + std::to_string(index);
  rows_.push_back(std::move(constraint));
  return index;
}

int LinearProgram::AddConstraint(std::vector<int> indices, std::vector<double> coefficients,
                                 RowSense sense, double rhs, std::string name) {
  Constraint c;
  c.indices = std::move(indices);
  c.coefficients = std::move(coefficients);
  c.sense = sense;
  c.rhs = rhs;
  c.name = std::move(name);
  return AddConstraint(std::move(c));
}

void LinearProgram::set_cost(int var, double cost) { costs_.at(var) = cost; }

void LinearProgram::set_bounds(int var, double lower, double upper) {
  if (lower > upper) Fail(ErrorCode::kInvalidModel, "set_bounds: lower > upper");
  lower_.at(var) = lower;
  upper_.at(var) = upper;
}

void LinearProgram::set_constraint_rhs(int row, double rhs) { rows_.at(row).rhs = rhs; }

long LinearProgram::num_nonzeros() const {
  long nnz = 0;
  for (const Constraint& c : rows_) nnz += static_cast<long>(c.indices.size());
  return nnz;
}

double LinearProgram::Evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != num_variables()) {
    Fail(ErrorCode::kDimensionMismatch, "Evaluate: wrong vector length");
  }
  double value = offset_;
  for (int j = 0; j < num_variables(); ++j) value += costs_[j] * x[j];
  return value;
}

std::vector<double> LinearProgram::RowActivities(const std::vector<double>& x) const {
  std::vector<double> activity(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Constraint& c = rows_[i];
    double sum = 0.0;
    for (std::size_t k = 0; k < c.indices.size(); ++k) sum += c.coefficients[k] * x[c.indices[k]];
    activity[i] = sum;
  }
  return activity;
}

double LinearProgram::MaxViolation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int j = 0; j < num_variables(); ++j) {
    worst = std::max({worst, lower_[j] - x[j], x[j] - upper_[j]});
  }
  const std::vector<double> activity = RowActivities(x);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double r = activity[i] - rows_[i].rhs;
    switch (rows_[i].sense) {
      case RowSense::kLessEqual: worst = std::max(worst, r); break;
      case RowSense::kGreaterEqual: worst = std::max(worst, -r); break;
      case RowSense::kEqual: worst = std::max(worst, std::abs(r)); break;
    }
  }
  return worst;
}

void LinearProgram::Validate() const {
  for (int j = 0; j < num_variables(); ++j) {
    if (!(lower_[j] <= upper_[j])) {
      Fail(ErrorCode::kInvalidModel, "variable " + names_[j] + " has lower > upper");
    }
    if (lower_[j] == kInf || upper_[j] == -kInf) {
      Fail(ErrorCode::kInvalidModel, "variable " + names_[j] + " has an empty domain");
    }
  }
  for (const Constraint& c : rows_) {
    for (int idx : c.indices) {
      if (idx < 0 || idx >= num_variables()) {
        Fail(ErrorCode::kInvalidModel, "row " + c.name + " references undeclared variable");
      }
    }
  }
}

}  // namespace icsp::lp
