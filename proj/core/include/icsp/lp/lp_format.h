#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "icsp/lp/linear_program.h"

namespace icsp::lp {

// Plain-text interchange format, one statement per line:
//
//   minimize: 3*x + -1*y + 0.5          (or maximize:; trailing constant optional)
//   bounds:
//   x 0 inf
//   y -inf 4
//   constraints:
//   cap: 1*x + 2*y <= 10
//   integers:                           (optional)
//   x
//   end
//
// Terms are `coef*name` separated by whitespace and optional `+` tokens.
// Numbers are written with 17 significant digits so a round trip is exact.
// Names may not contain whitespace, ':' or '*'. Lines starting with '#' are
// comments.
struct ParsedLp {
  LinearProgram lp;
  std::vector<int> integers;
};

void WriteLpFormat(std::ostream& out, const LinearProgram& lp,
                   const std::vector<int>& integers = {});
std::string ToLpFormat(const LinearProgram& lp, const std::vector<int>& integers = {});

// Throws Error(kParseError) with the offending line number.
ParsedLp ParseLpFormat(std::istream& in);
ParsedLp ParseLpFormat(const std::string& text);

}  // namespace icsp::lp
