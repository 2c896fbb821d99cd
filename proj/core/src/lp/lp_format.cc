#include "icsp/lp/lp_format.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "icsp/common/error.h"

namespace icsp::lp {
namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CheckName(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\r\n:*") != std::string::npos || name == "+") {
    Fail(ErrorCode::kInvalidModel, "name '" + name + "' cannot be written in LP format");
  }
}

void WriteTerms(std::ostream& out, const LinearProgram& lp, const std::vector<int>& idx,
                const std::vector<double>& coef) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k > 0) out << " +";
    out << ' ' << Num(coef[k]) << '*' << lp.variable_name(idx[k]);
  }
}

class Parser {
 public:
  explicit Parser(std::istream& in) : in_(in) {}

  ParsedLp Run() {
    ParsedLp result;
    std::string line;
    enum class Section { kNone, kBounds, kConstraints, kIntegers } section = Section::kNone;
    bool have_objective = false;
    bool ended = false;
    std::vector<std::string> pending_objective;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      line = line.substr(first);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (ended) Error("content after 'end'");
      if (line.rfind("minimize:", 0) == 0 || line.rfind("maximize:", 0) == 0) {
        if (have_objective) Error("duplicate objective");
        result.lp.set_sense(line[1] == 'a' ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize);
        pending_objective = Tokens(line.substr(9));
        have_objective = true;
        continue;
      }
      if (line == "bounds:") { section = Section::kBounds; continue; }
      if (line == "constraints:") {
        section = Section::kConstraints;
        ApplyObjective(result.lp, pending_objective);
        continue;
      }
      if (line == "integers:") { section = Section::kIntegers; continue; }
      if (line == "end") { ended = true; continue; }
      switch (section) {
        case Section::kNone: Error("statement outside a section");
        case Section::kBounds: {
          const auto tok = Tokens(line);
          if (tok.size() != 3) Error("bound line needs 'name lower upper'");
          if (index_.count(tok[0])) Error("duplicate variable " + tok[0]);
          index_[tok[0]] = result.lp.num_variables();
          try {
            result.lp.AddVariable(Number(tok[1]), Number(tok[2]), 0.0, tok[0]);
          } catch (const icsp::Error& e) {
            Error(e.what());
          }
          break;
        }
        case Section::kConstraints: ParseRow(result.lp, line); break;
        case Section::kIntegers:
          for (const auto& name : Tokens(line)) result.integers.push_back(Lookup(name));
          break;
      }
    }
    if (!have_objective) Error("missing objective line");
    if (!ended) Error("missing 'end'");
    if (section == Section::kBounds || section == Section::kNone) {
      ApplyObjective(result.lp, pending_objective);
    }
    return result;
  }

 private:
  [[noreturn]] void Error(const std::string& msg) const {
    Fail(ErrorCode::kParseError, "line " + std::to_string(line_no_) + ": " + msg);
  }

  static std::vector<std::string> Tokens(const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) {
      if (t != "+") out.push_back(t);
    }
    return out;
  }

  double Number(const std::string& s) const {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) Error("bad number '" + s + "'");
    return v;
  }

  int Lookup(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) Error("unknown variable '" + name + "'");
    return it->second;
  }

  // Parses `coef*name` terms; a bare number is returned through `constant`.
  void Terms(const std::vector<std::string>& tok, std::size_t begin, std::size_t end,
             std::vector<int>& idx, std::vector<double>& coef, double* constant) const {
    for (std::size_t k = begin; k < end; ++k) {
      const auto star = tok[k].find('*');
      if (star == std::string::npos) {
        if (!constant) Error("expected coef*name, got '" + tok[k] + "'");
        *constant += Number(tok[k]);
        continue;
      }
      coef.push_back(Number(tok[k].substr(0, star)));
      idx.push_back(Lookup(tok[k].substr(star + 1)));
    }
  }

  void ApplyObjective(LinearProgram& lp, const std::vector<std::string>& tok) {
    if (objective_applied_) return;
    objective_applied_ = true;
    std::vector<int> idx;
    std::vector<double> coef;
    double constant = 0.0;
    Terms(tok, 0, tok.size(), idx, coef, &constant);
    std::unordered_set<int> seen;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (!seen.insert(idx[k]).second) Error("objective repeats a variable");
      lp.set_cost(idx[k], coef[k]);
    }
    lp.set_objective_offset(constant);
  }

  void ParseRow(LinearProgram& lp, const std::string& line) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) Error("constraint needs 'name:'");
    const std::string name = line.substr(0, colon);
    const auto tok = Tokens(line.substr(colon + 1));
    if (tok.size() < 2) Error("constraint needs a sense and a right-hand side");
    const std::string& sense = tok[tok.size() - 2];
    RowSense rs;
    if (sense == "<=") rs = RowSense::kLessEqual;
    else if (sense == "=") rs = RowSense::kEqual;
    else if (sense == ">=") rs = RowSense::kGreaterEqual;
    else Error("bad sense '" + sense + "'");
    std::vector<int> idx;
    std::vector<double> coef;
    Terms(tok, 0, tok.size() - 2, idx, coef, nullptr);
    try {
      lp.AddConstraint(std::move(idx), std::move(coef), rs, Number(tok.back()), name);
    } catch (const icsp::Error& e) {
      if (e.code() == ErrorCode::kParseError) throw;
      Error(e.what());
    }
  }

  std::istream& in_;
  int line_no_ = 0;
  bool objective_applied_ = false;
  std::unordered_map<std::string, int> index_;
};

}  // namespace

void WriteLpFormat(std::ostream& out, const LinearProgram& lp, const std::vector<int>& integers) {
  std::unordered_set<std::string> names;
  for (int j = 0; j < lp.num_variables(); ++j) {
    CheckName(lp.variable_name(j));
    if (!names.insert(lp.variable_name(j)).second) {
      Fail(ErrorCode::kInvalidModel, "duplicate variable name " + lp.variable_name(j));
    }
  }
  out << (lp.sense() == ObjectiveSense::kMaximize ? "maximize:" : "minimize:");
  std::vector<int> idx;
  std::vector<double> coef;
  for (int j = 0; j < lp.num_variables(); ++j) {
    if (lp.cost(j) != 0.0) {
      idx.push_back(j);
      coef.push_back(lp.cost(j));
    }
  }
  WriteTerms(out, lp, idx, coef);
  out << (idx.empty() ? " " : " + ") << Num(lp.objective_offset()) << '\n';
  out << "bounds:\n";
  for (int j = 0; j < lp.num_variables(); ++j) {
    out << lp.variable_name(j) << ' ' << Num(lp.lower(j)) << ' ' << Num(lp.upper(j)) << '\n';
  }
  out << "constraints:\n";
  for (const Constraint& row : lp.constraints()) {
    CheckName(row.name);
    out << row.name << ':';
    WriteTerms(out, lp, row.indices, row.coefficients);
    out << ' ' << RowSenseSymbol(row.sense) << ' ' << Num(row.rhs) << '\n';
  }
  if (!integers.empty()) {
    out << "integers:\n";
    for (int j : integers) out << lp.variable_name(j) << '\n';
  }
  out << "end\n";
}

std::string ToLpFormat(const LinearProgram& lp, const std::vector<int>& integers) {
  std::ostringstream ss;
  WriteLpFormat(ss, lp, integers);
  return ss.str();
}

ParsedLp ParseLpFormat(std::istream& in) { return Parser(in).Run(); }

ParsedLp ParseLpFormat(const std::string& text) {
  std::istringstream ss(text);
  return ParseLpFormat(ss);
}

}  // namespace icsp::lp
