#pragma once

#include <limits>
#include <string>
#include <vector>

namespace icsp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

const char* RowSenseSymbol(RowSense sense);

struct Constraint {
  std::vector<int> indices;
  std::vector<double> coefficients;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// A linear program  min/max c'x + offset  s.t.  rows (<=, =, >=) rhs,
// lower <= x <= upper. Bounds may be infinite. The model is a plain value:
// build it, then hand it to solvers by const reference.
class LinearProgram {
 public:
  LinearProgram() = default;

  int AddVariable(double lower, double upper, double cost, std::string name = {});
  // Rejects rows that reference undeclared variables or repeat an index.
  int AddConstraint(Constraint constraint);
  int AddConstraint(std::vector<int> indices, std::vector<double> coefficients,
                    RowSense sense, double rhs, std::string name = {});

  void set_sense(ObjectiveSense sense) { sense_ = sense; }
  void set_objective_offset(double offset) { offset_ = offset; }
  void set_cost(int var, double cost);
  void set_bounds(int var, double lower, double upper);
  void set_constraint_rhs(int row, double rhs);

  ObjectiveSense sense() const { return sense_; }
  double objective_offset() const { return offset_; }
  int num_variables() const { return static_cast<int>(costs_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  long num_nonzeros() const;

  double cost(int var) const { return costs_[var]; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  const std::string& variable_name(int var) const { return names_[var]; }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<double>& lowers() const { return lower_; }
  const std::vector<double>& uppers() const { return upper_; }
  const Constraint& constraint(int row) const { return rows_[row]; }
  const std::vector<Constraint>& constraints() const { return rows_; }

  // Objective value of x including the offset.
  double Evaluate(const std::vector<double>& x) const;
  // a_i' x for every row.
  std::vector<double> RowActivities(const std::vector<double>& x) const;
  // Largest absolute violation of rows and bounds at x.
  double MaxViolation(const std::vector<double>& x) const;

  // Throws Error(kInvalidModel) if any type invariant is broken.
  void Validate() const;

 private:
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  double offset_ = 0.0;
  std::vector<double> costs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> names_;
  std::vector<Constraint> rows_;
};

}  // namespace icsp::lp
