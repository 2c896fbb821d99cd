#pragma once

#include <vector>

#include "icsp/lp/linear_program.h"

namespace icsp::lp {

struct Vertex {
  std::vector<double> point;
  double objective = 0.0;
};

inline constexpr int kMaxEnumerationVariables = 12;

// Brute-force list of basic feasible solutions: every choice of n linearly
// independent hyperplanes among the rows and finite bounds (equality rows are
// always active) is solved and kept if feasible within 1e-9. Points closer
// than 1e-9 in every coordinate are merged. The objective includes the offset.
// Throws Error(kTooLarge) beyond kMaxEnumerationVariables variables and
// Error(kUnboundedRegion) if the feasible region has a recession direction.
std::vector<Vertex> EnumerateVertices(const LinearProgram& lp);

// Same enumeration without the boundedness check. The result is the finite
// vertex set of a pointed polyhedron, which is what dual-representation
// oracles need when the dual region itself is unbounded.
std::vector<Vertex> EnumerateVerticesUnchecked(const LinearProgram& lp);

// Index of the best vertex for the program's sense, or -1 if the list is empty.
int BestVertex(const LinearProgram& lp, const std::vector<Vertex>& vertices);

}  // namespace icsp::lp
