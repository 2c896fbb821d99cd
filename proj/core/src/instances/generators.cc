#include "icsp/instances/generators.h"

#include <algorithm>
#include <sstream>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "icsp/common/error.h"
#include "icsp/common/rng.h"

namespace icsp::instances {
namespace internal {
std::string_view InvpReferenceJson();
}  // namespace internal

using nlohmann::json;

namespace {

std::string SizeLabel(int n, int m) { return std::to_string(n) + "x" + std::to_string(m); }

Rng InstanceStream(const std::string& family, const std::string& size, std::uint64_t seed,
                   std::string_view purpose) {
  return Rng::ForStream(seed, {family, size, purpose});
}

void CheckSizes(int n, int m) {
  if (n < 1 || m < 1) Fail(ErrorCode::kInvalidModel, "instance sizes must be >= 1");
}

const json& InvpReference() {
  static const json data = json::parse(internal::InvpReferenceJson());
  return data;
}

std::vector<std::vector<double>> Matrix(const json& j) {
  return j.get<std::vector<std::vector<double>>>();
}

// Scenario-specific second-stage data for CFLP with demand vector d.
void CflpScenarioData(const sp::TwoStageProblem& p, const std::vector<double>& d,
                      sp::Scenario& s) {
  const int n = p.metadata.at("n").get<int>();
  const int m = p.metadata.at("m").get<int>();
  const auto unit = Matrix(p.metadata.at("unit_cost"));
  const double penalty = p.metadata.at("shortfall_penalty").get<double>();
  std::vector<double> q(n * m + m);
  SparseMatrix w(m + n, n * m + m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const int col = i * m + j;
      q[col] = unit[i][j] * d[j];
      w.Add(j, col, 1.0);
      if (d[j] != 0.0) w.Add(m + i, col, d[j]);
    }
  }
  for (int j = 0; j < m; ++j) {
    q[n * m + j] = penalty * d[j];
    w.Add(j, n * m + j, 1.0);
  }
  w.Canonicalize();
  s.q = std::move(q);
  s.W = std::move(w);
  s.h.assign(m + n, 0.0);
  for (int j = 0; j < m; ++j) s.h[j] = 1.0;
}

}  // namespace

std::string ToString(Family family) {
  switch (family) {
    case Family::kCflp: return "CFLP";
    case Family::kSslp: return "SSLP";
    case Family::kInvp: return "INVP";
  }
  return "?";
}

Family ParseFamily(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "CFLP") return Family::kCflp;
  if (up == "SSLP") return Family::kSslp;
  if (up == "INVP") return Family::kInvp;
  Fail(ErrorCode::kInvalidModel, "unknown instance family '" + name + "'");
}

std::string InstanceName(const InstanceSpec& spec) {
  if (spec.family == Family::kInvp) {
    return std::string("INVP_") + (spec.invp_recourse == InvpRecourse::kBinary ? "B" : "I") + "_" +
           (spec.invp_technology == InvpTechnology::kIdentity ? "E" : "H");
  }
  return ToString(spec.family) + "_" + std::to_string(spec.n) + "_" + std::to_string(spec.m);
}

InstanceSpec ParseInstanceName(const std::string& name) {
  std::vector<std::string> parts;
  std::stringstream in(name);
  for (std::string part; std::getline(in, part, '_');) parts.push_back(part);
  auto bad = [&]() -> InstanceSpec {
    Fail(ErrorCode::kParseError, "cannot parse instance name '" + name + "'");
  };
  if (parts.size() != 3) return bad();
  InstanceSpec spec;
  try {
    spec.family = ParseFamily(parts[0]);
  } catch (const Error&) {
    return bad();
  }
  if (spec.family == Family::kInvp) {
    if (parts[1] != "B" && parts[1] != "I") return bad();
    if (parts[2] != "E" && parts[2] != "H") return bad();
    spec.invp_recourse = parts[1] == "B" ? InvpRecourse::kBinary : InvpRecourse::kInteger;
    spec.invp_technology = parts[2] == "E" ? InvpTechnology::kIdentity : InvpTechnology::kHalves;
    return spec;
  }
  try {
    std::size_t used = 0;
    spec.n = std::stoi(parts[1], &used);
    if (used != parts[1].size()) return bad();
    spec.m = std::stoi(parts[2], &used);
    if (used != parts[2].size()) return bad();
  } catch (const std::logic_error&) {
    return bad();
  }
  return spec;
}

sp::TwoStageProblem GenCflp(int n, int m, std::uint64_t seed, const CflpOptions& options) {
  CheckSizes(n, m);
  const std::string size = SizeLabel(n, m);
  Rng rng = InstanceStream("CFLP", size, seed, "instance");
  std::vector<double> cx(m), cy(m), fx(n), fy(n);
  for (int j = 0; j < m; ++j) cx[j] = rng.Uniform();
  for (int j = 0; j < m; ++j) cy[j] = rng.Uniform();
  for (int i = 0; i < n; ++i) fx[i] = rng.Uniform();
  for (int i = 0; i < n; ++i) fy[i] = rng.Uniform();
  std::vector<double> demand(m), capacity(n), fixed(n);
  for (int j = 0; j < m; ++j) demand[j] = static_cast<double>(rng.UniformInt(5, 35));
  for (int i = 0; i < n; ++i) capacity[i] = static_cast<double>(rng.UniformInt(10, 160));
  for (int i = 0; i < n; ++i) {
    fixed[i] = std::floor(static_cast<double>(rng.UniformInt(100, 110)) * std::sqrt(capacity[i]) +
                          static_cast<double>(rng.UniformInt(0, 90)));
  }
  double total_demand = 0.0, total_capacity = 0.0;
  for (double d : demand) total_demand += d;
  for (double c : capacity) total_capacity += c;
  for (double& c : capacity) {
    c = std::floor(c * options.capacity_ratio * total_demand / total_capacity);
  }
  std::vector<std::vector<double>> unit(n, std::vector<double>(m));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) unit[i][j] = 10.0 * std::hypot(cx[j] - fx[i], cy[j] - fy[i]);
  }

  sp::TwoStageProblem p;
  p.id = "CFLP_" + std::to_string(n) + "_" + std::to_string(m) + "_seed" + std::to_string(seed);
  p.family = "CFLP";
  p.first.c = fixed;
  p.first.lower.assign(n, 0.0);
  p.first.upper.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    p.first.integers.push_back(i);
    p.first.names.push_back("open" + std::to_string(i));
  }
  p.first.A = SparseMatrix(0, n);

  sp::SecondStage& s = p.second;
  s.lower.assign(n * m + m, 0.0);
  s.upper.assign(n * m + m, 1.0);
  s.sense.assign(m, lp::RowSense::kEqual);
  s.sense.insert(s.sense.end(), n, lp::RowSense::kLessEqual);
  s.T = SparseMatrix(m + n, n);
  for (int i = 0; i < n; ++i) s.T.Add(m + i, i, -capacity[i]);
  s.T.Canonicalize();

  p.metadata = {{"n", n},
                {"m", m},
                {"seed", seed},
                {"demand", demand},
                {"capacity", capacity},
                {"fixed_cost", fixed},
                {"unit_cost", unit},
                {"capacity_ratio", options.capacity_ratio},
                {"shortfall_penalty", options.shortfall_penalty},
                {"demand_distribution", "integer uniform on [ceil(0.5 d), floor(1.5 d)]"}};
  // Defaults are the base-demand scenario.
  sp::Scenario base;
  CflpScenarioData(p, demand, base);
  s.q = *base.q;
  s.W = *base.W;
  return p;
}

sp::TwoStageProblem GenSslp(int n, int m, std::uint64_t seed, const SslpOptions& options) {
  CheckSizes(n, m);
  const std::string size = SizeLabel(n, m);
  Rng rng = InstanceStream("SSLP", size, seed, "instance");
  std::vector<double> cost(n);
  for (double& c : cost) c = rng.Uniform(40.0, 80.0);
  std::vector<std::vector<double>> d(m, std::vector<double>(n));
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      d[i][j] = static_cast<double>(rng.UniformInt(0, 25));
      total += d[i][j];
    }
  }
  const double u = std::ceil(options.capacity_factor * total / n);

  sp::TwoStageProblem p;
  p.id = "SSLP_" + std::to_string(n) + "_" + std::to_string(m) + "_seed" + std::to_string(seed);
  p.family = "SSLP";
  p.first.c = cost;
  p.first.lower.assign(n, 0.0);
  p.first.upper.assign(n, 1.0);
  for (int j = 0; j < n; ++j) {
    p.first.integers.push_back(j);
    p.first.names.push_back("server" + std::to_string(j));
  }
  std::vector<Triplet> a;
  for (int j = 0; j < n; ++j) a.push_back({0, j, 1.0});
  p.first.A = SparseMatrix(1, n, a);
  p.first.sense = {lp::RowSense::kLessEqual};
  p.first.b = {static_cast<double>(n)};

  sp::SecondStage& s = p.second;
  const int ny = m * n + n;
  s.q.assign(ny, 0.0);
  s.lower.assign(ny, 0.0);
  s.upper.assign(ny, 1.0);
  s.W = SparseMatrix(m + n, ny);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int col = i * n + j;
      s.q[col] = -d[i][j];
      s.integers.push_back(col);
      s.W.Add(i, col, 1.0);
      if (d[i][j] != 0.0) s.W.Add(m + j, col, d[i][j]);
    }
  }
  for (int j = 0; j < n; ++j) {
    const int col = m * n + j;
    s.q[col] = options.overflow_penalty;
    s.upper[col] = lp::kInf;
    s.W.Add(m + j, col, -1.0);
  }
  s.W.Canonicalize();
  s.T = SparseMatrix(m + n, n);
  for (int j = 0; j < n; ++j) s.T.Add(m + j, j, -u);
  s.T.Canonicalize();
  s.sense.assign(m, lp::RowSense::kEqual);
  s.sense.insert(s.sense.end(), n, lp::RowSense::kLessEqual);

  p.metadata = {{"n", n},
                {"m", m},
                {"seed", seed},
                {"capacity", u},
                {"capacity_factor", options.capacity_factor},
                {"availability", options.availability},
                {"overflow_penalty", options.overflow_penalty},
                {"availability_distribution", "independent Bernoulli per client"}};
  return p;
}

sp::TwoStageProblem GenInvp(InvpRecourse recourse, InvpTechnology technology, std::uint64_t seed) {
  const json& ref = InvpReference();
  InstanceSpec spec;
  spec.family = Family::kInvp;
  spec.invp_recourse = recourse;
  spec.invp_technology = technology;
  sp::TwoStageProblem p;
  p.id = InstanceName(spec) + "_seed" + std::to_string(seed);
  p.family = "INVP";
  const json& fs = ref.at("first_stage");
  p.first.c = fs.at("c").get<std::vector<double>>();
  p.first.lower = fs.at("lower").get<std::vector<double>>();
  p.first.upper = fs.at("upper").get<std::vector<double>>();
  p.first.names = {"x0", "x1"};
  p.first.A = SparseMatrix(0, 2);

  const json& ss = ref.at("second_stage");
  sp::SecondStage& s = p.second;
  s.q = ss.at("q").get<std::vector<double>>();
  const int ny = s.n_y();
  const double upper = recourse == InvpRecourse::kBinary ? ss.at("binary_upper").get<double>()
                                                         : ss.at("integer_upper").get<double>();
  s.lower.assign(ny, 0.0);
  s.upper.assign(ny, upper);
  for (int k = 0; k < ny; ++k) s.integers.push_back(k);
  const auto w = Matrix(ss.at("W"));
  s.W = SparseMatrix(static_cast<int>(w.size()), ny);
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    for (int k = 0; k < ny; ++k) s.W.Add(i, k, w[i][k]);
  }
  s.W.Canonicalize();
  const auto t = Matrix(ref.at("technology").at(technology == InvpTechnology::kIdentity ? "E" : "H"));
  s.T = SparseMatrix(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (t[i][j] != 0.0) s.T.Add(i, j, t[i][j]);
    }
  }
  s.T.Canonicalize();
  s.sense.assign(2, lp::RowSense::kLessEqual);
  p.metadata = {{"variant", recourse == InvpRecourse::kBinary ? "B" : "I"},
                {"technology", technology == InvpTechnology::kIdentity ? "E" : "H"},
                {"seed", seed},
                {"rhs_support", ref.at("rhs_support")}};
  return p;
}

sp::TwoStageProblem GenerateInstance(const InstanceSpec& spec) {
  switch (spec.family) {
    case Family::kCflp: return GenCflp(spec.n, spec.m, spec.seed);
    case Family::kSslp: return GenSslp(spec.n, spec.m, spec.seed);
    case Family::kInvp: return GenInvp(spec.invp_recourse, spec.invp_technology, spec.seed);
  }
  Fail(ErrorCode::kInvalidModel, "unknown family");
}

sp::ScenarioSet SampleScenarios(const sp::TwoStageProblem& problem, int count, std::uint64_t seed) {
  if (count < 1) Fail(ErrorCode::kEmptyScenarioSet, "scenario count must be >= 1");
  sp::ScenarioSet set;
  set.id = problem.id + "_scen" + std::to_string(count) + "_seed" + std::to_string(seed);
  set.problem_id = problem.id;
  set.metadata = {{"count", count}, {"seed", seed}, {"kind", "sampled"}};
  Rng rng = Rng::ForStream(seed, {problem.family, problem.id, "scenarios"});
  const double p = 1.0 / count;
  for (int k = 0; k < count; ++k) {
    sp::Scenario s;
    s.id = "s" + std::to_string(k);
    s.probability = p;
    if (problem.family == "CFLP") {
      const auto base = problem.metadata.at("demand").get<std::vector<double>>();
      std::vector<double> d(base.size());
      for (std::size_t j = 0; j < base.size(); ++j) {
        d[j] = static_cast<double>(rng.UniformInt(static_cast<std::int64_t>(std::ceil(0.5 * base[j])),
                                                  static_cast<std::int64_t>(std::floor(1.5 * base[j]))));
        s.features.push_back(d[j] / base[j]);
      }
      CflpScenarioData(problem, d, s);
    } else if (problem.family == "SSLP") {
      const int n = problem.metadata.at("n").get<int>();
      const int m = problem.metadata.at("m").get<int>();
      const double a = problem.metadata.at("availability").get<double>();
      s.h.assign(m + n, 0.0);
      for (int i = 0; i < m; ++i) {
        s.h[i] = rng.Bernoulli(a) ? 1.0 : 0.0;
        s.features.push_back(s.h[i]);
      }
    } else if (problem.family == "INVP") {
      const auto support = problem.metadata.at("rhs_support").get<std::vector<double>>();
      for (int i = 0; i < 2; ++i) {
        s.h.push_back(rng.Uniform(support[0], support[1]));
      }
      for (double h : s.h) s.features.push_back((h - 10.0) / 5.0);
    } else {
      Fail(ErrorCode::kInvalidModel, "no scenario sampler for family '" + problem.family + "'");
    }
    set.scenarios.push_back(std::move(s));
  }
  return set;
}

sp::Scenario CflpScenario(const sp::TwoStageProblem& problem, const std::vector<double>& demand) {
  if (problem.family != "CFLP") Fail(ErrorCode::kInvalidModel, "not a CFLP instance");
  const auto base = problem.metadata.at("demand").get<std::vector<double>>();
  if (demand.size() != base.size()) {
    Fail(ErrorCode::kDimensionMismatch, "demand vector has the wrong length");
  }
  sp::Scenario s;
  for (std::size_t j = 0; j < base.size(); ++j) s.features.push_back(demand[j] / base[j]);
  CflpScenarioData(problem, demand, s);
  return s;
}

sp::ScenarioSet InvpGrid(const sp::TwoStageProblem& problem, int count) {
  const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
  if (count < 1 || k * k != count) {
    Fail(ErrorCode::kInvalidModel, "INVP grid needs a perfect-square scenario count, got " +
                                       std::to_string(count));
  }
  const auto support = problem.metadata.at("rhs_support").get<std::vector<double>>();
  std::vector<double> axis(k);
  for (int t = 0; t < k; ++t) {
    axis[t] = k == 1 ? 0.5 * (support[0] + support[1])
                     : support[0] + (support[1] - support[0]) * static_cast<double>(t) / (k - 1);
  }
  sp::ScenarioSet set;
  set.id = problem.id + "_grid" + std::to_string(count);
  set.problem_id = problem.id;
  set.metadata = {{"count", count}, {"kind", "grid"}};
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      sp::Scenario s;
      s.id = "g" + std::to_string(a) + "_" + std::to_string(b);
      s.probability = 1.0 / count;
      s.h = {axis[a], axis[b]};
      for (double h : s.h) s.features.push_back((h - 10.0) / 5.0);
      set.scenarios.push_back(std::move(s));
    }
  }
  return set;
}

}  // namespace icsp::instances
