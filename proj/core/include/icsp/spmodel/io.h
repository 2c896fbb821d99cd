#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::sp {

// Instance and scenario-set files are JSON. Sparse matrices are written as
// {"rows": r, "cols": c, "entries": [[i, j, v], ...]}; infinite bounds as the
// strings "inf" / "-inf". Scenario sets reference their instance by id.
nlohmann::json ToJson(const TwoStageProblem& problem);
nlohmann::json ToJson(const ScenarioSet& set);
TwoStageProblem ProblemFromJson(const nlohmann::json& j);
ScenarioSet ScenarioSetFromJson(const nlohmann::json& j);

void SaveProblem(const TwoStageProblem& problem, const std::string& path);
void SaveScenarioSet(const ScenarioSet& set, const std::string& path);
TwoStageProblem LoadProblem(const std::string& path);
ScenarioSet LoadScenarioSet(const std::string& path);

// Helpers shared by other file formats.
nlohmann::json NumberToJson(double v);
double NumberFromJson(const nlohmann::json& j);
nlohmann::json MatrixToJson(const SparseMatrix& m);
SparseMatrix MatrixFromJson(const nlohmann::json& j);
nlohmann::json ReadJsonFile(const std::string& path);
// Writes `j` with two-space indentation and a trailing newline.
void WriteJsonFile(const nlohmann::json& j, const std::string& path);

}  // namespace icsp::sp
