#include "icsp/spmodel/io.h"

#include <cmath>
#include <fstream>
#include <limits>

#include "icsp/common/error.h"

namespace icsp::sp {

using nlohmann::json;

namespace {

json SenseToJson(const std::vector<lp::RowSense>& sense) {
  json out = json::array();
  for (lp::RowSense s : sense) out.push_back(lp::RowSenseSymbol(s));
  return out;
}

std::vector<lp::RowSense> SenseFromJson(const json& j) {
  std::vector<lp::RowSense> out;
  for (const auto& s : j) {
    const std::string v = s.get<std::string>();
    if (v == "<=") out.push_back(lp::RowSense::kLessEqual);
    else if (v == "=") out.push_back(lp::RowSense::kEqual);
    else if (v == ">=") out.push_back(lp::RowSense::kGreaterEqual);
    else Fail(ErrorCode::kParseError, "unknown row sense '" + v + "'");
  }
  return out;
}

json VectorToJson(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(NumberToJson(x));
  return out;
}

std::vector<double> VectorFromJson(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(NumberFromJson(x));
  return out;
}

template <typename F>
auto Parse(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace

json NumberToJson(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double NumberFromJson(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    Fail(ErrorCode::kParseError, "expected a number, got '" + s + "'");
  }
  if (!j.is_number()) Fail(ErrorCode::kParseError, "expected a number");
  return j.get<double>();
}

json MatrixToJson(const SparseMatrix& m) {
  json entries = json::array();
  for (const Triplet& t : m.entries()) entries.push_back(json::array({t.row, t.col, t.value}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

SparseMatrix MatrixFromJson(const json& j) {
  std::vector<Triplet> entries;
  for (const auto& e : j.at("entries")) {
    entries.push_back(Triplet{e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  }
  return SparseMatrix(j.at("rows").get<int>(), j.at("cols").get<int>(), std::move(entries));
}

json ToJson(const TwoStageProblem& p) {
  const FirstStage& f = p.first;
  const SecondStage& s = p.second;
  return json{
      {"format", "icsp.two_stage/1"},
      {"id", p.id},
      {"family", p.family},
      {"metadata", p.metadata},
      {"first_stage",
       {{"c", VectorToJson(f.c)},
        {"lower", VectorToJson(f.lower)},
        {"upper", VectorToJson(f.upper)},
        {"integers", f.integers},
        {"names", f.names},
        {"A", MatrixToJson(f.A)},
        {"sense", SenseToJson(f.sense)},
        {"b", VectorToJson(f.b)}}},
      {"second_stage",
       {{"q", VectorToJson(s.q)},
        {"lower", VectorToJson(s.lower)},
        {"upper", VectorToJson(s.upper)},
        {"integers", s.integers},
        {"W", MatrixToJson(s.W)},
        {"T", MatrixToJson(s.T)},
        {"sense", SenseToJson(s.sense)}}},
  };
}

TwoStageProblem ProblemFromJson(const json& j) {
  return Parse("instance file", [&] {
    if (j.at("format").get<std::string>() != "icsp.two_stage/1") {
      Fail(ErrorCode::kParseError, "unsupported instance format");
    }
    TwoStageProblem p;
    p.id = j.at("id").get<std::string>();
    p.family = j.at("family").get<std::string>();
    p.metadata = j.value("metadata", json::object());
    const json& f = j.at("first_stage");
    p.first.c = VectorFromJson(f.at("c"));
    p.first.lower = VectorFromJson(f.at("lower"));
    p.first.upper = VectorFromJson(f.at("upper"));
    p.first.integers = f.at("integers").get<std::vector<int>>();
    p.first.names = f.value("names", std::vector<std::string>{});
    p.first.A = MatrixFromJson(f.at("A"));
    p.first.sense = SenseFromJson(f.at("sense"));
    p.first.b = VectorFromJson(f.at("b"));
    const json& s = j.at("second_stage");
    p.second.q = VectorFromJson(s.at("q"));
    p.second.lower = VectorFromJson(s.at("lower"));
    p.second.upper = VectorFromJson(s.at("upper"));
    p.second.integers = s.at("integers").get<std::vector<int>>();
    p.second.W = MatrixFromJson(s.at("W"));
    p.second.T = MatrixFromJson(s.at("T"));
    p.second.sense = SenseFromJson(s.at("sense"));
    p.Validate();
    return p;
  });
}

json ToJson(const ScenarioSet& set) {
  json scen = json::array();
  for (const Scenario& s : set.scenarios) {
    json e{{"id", s.id}, {"p", s.probability}, {"h", VectorToJson(s.h)},
           {"features", VectorToJson(s.features)}};
    if (s.q) e["q"] = VectorToJson(*s.q);
    if (s.W) e["W"] = MatrixToJson(*s.W);
    if (s.T) e["T"] = MatrixToJson(*s.T);
    scen.push_back(std::move(e));
  }
  return json{{"format", "icsp.scenarios/1"},
              {"id", set.id},
              {"problem_id", set.problem_id},
              {"metadata", set.metadata},
              {"scenarios", scen}};
}

ScenarioSet ScenarioSetFromJson(const json& j) {
  return Parse("scenario file", [&] {
    if (j.at("format").get<std::string>() != "icsp.scenarios/1") {
      Fail(ErrorCode::kParseError, "unsupported scenario format");
    }
    ScenarioSet set;
    set.id = j.at("id").get<std::string>();
    set.problem_id = j.at("problem_id").get<std::string>();
    set.metadata = j.value("metadata", json::object());
    for (const auto& e : j.at("scenarios")) {
      Scenario s;
      s.id = e.at("id").get<std::string>();
      s.probability = e.at("p").get<double>();
      s.h = VectorFromJson(e.at("h"));
      s.features = VectorFromJson(e.at("features"));
      if (e.contains("q")) s.q = VectorFromJson(e.at("q"));
      if (e.contains("W")) s.W = MatrixFromJson(e.at("W"));
      if (e.contains("T")) s.T = MatrixFromJson(e.at("T"));
      set.scenarios.push_back(std::move(s));
    }
    return set;
  });
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParseError, path + ": " + e.what());
  }
}

void WriteJsonFile(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path);
}

void SaveProblem(const TwoStageProblem& problem, const std::string& path) {
  WriteJsonFile(ToJson(problem), path);
}

void SaveScenarioSet(const ScenarioSet& set, const std::string& path) {
  WriteJsonFile(ToJson(set), path);
}

TwoStageProblem LoadProblem(const std::string& path) { return ProblemFromJson(ReadJsonFile(path)); }

ScenarioSet LoadScenarioSet(const std::string& path) {
  return ScenarioSetFromJson(ReadJsonFile(path));
}

}  // namespace icsp::sp
