#pragma once

#include <cstdint>
#include <string>

#include "icsp/spmodel/two_stage_problem.h"

namespace icsp::instances {

enum class Family { kCflp, kSslp, kInvp };
enum class InvpRecourse { kBinary, kInteger };      // B | I
enum class InvpTechnology { kIdentity, kHalves };   // E | H

struct InstanceSpec {
  Family family = Family::kCflp;
  int n = 10;  // facilities / servers
  int m = 10;  // customers / clients
  InvpRecourse invp_recourse = InvpRecourse::kBinary;
  InvpTechnology invp_technology = InvpTechnology::kIdentity;
  std::uint64_t seed = 0;
};

std::string ToString(Family family);
Family ParseFamily(const std::string& name);
// e.g. "CFLP_10_10", "SSLP_5_25", "INVP_B_E".
std::string InstanceName(const InstanceSpec& spec);
// Inverse of InstanceName; the seed is left at 0. Throws Error(kParseError).
InstanceSpec ParseInstanceName(const std::string& name);

struct CflpOptions {
  double capacity_ratio = 2.0;      // total capacity / total base demand
  double shortfall_penalty = 200.0; // per unit of unmet demand
};

// Capacitated facility location. First stage: open x_i in {0,1} with fixed
// costs. Second stage per scenario: fractions y_ij in [0,1] of customer j's
// demand served by facility i and shortfall fractions z_j in [0,1] with
//   sum_i y_ij + z_j = 1                  (customer j)
//   sum_j d_j y_ij - cap_i x_i <= 0       (facility i)
// at cost sum_ij 10 dist_ij d_j y_ij + sum_j penalty d_j z_j. Columns are
// y_ij at i * m + j, then z_j.
sp::TwoStageProblem GenCflp(int n, int m, std::uint64_t seed, const CflpOptions& options = {});

struct SslpOptions {
  double availability = 0.5;       // Bernoulli probability per client
  double capacity_factor = 0.6;    // u = capacity_factor * sum_ij d_ij / n
  double overflow_penalty = 1000.0;
};

// Stochastic server location. First stage: x_j in {0,1}, sum_j x_j <= n.
// Second stage: binary y_ij assigning active client i to server j with
// revenue d_ij (cost -d_ij) and overflow y_j0 >= 0 at the penalty:
//   sum_j y_ij = h_i                      (client i, h_i in {0,1})
//   sum_i d_ij y_ij - y_j0 - u x_j <= 0   (server j)
// Columns are y_ij at i * n + j, then y_j0.
sp::TwoStageProblem GenSslp(int n, int m, std::uint64_t seed, const SslpOptions& options = {});

// Investment problem: x in [0,5]^2, four second-stage columns (binary or
// integer in [0,5]) and rows W y <= xi - T x with xi supported on [5,15]^2.
sp::TwoStageProblem GenInvp(InvpRecourse recourse, InvpTechnology technology, std::uint64_t seed);

sp::TwoStageProblem GenerateInstance(const InstanceSpec& spec);

// Equal-probability scenarios drawn from the family's distribution: integer
// demands uniform on [0.5 d, 1.5 d] (CFLP), Bernoulli client availability
// (SSLP), independent uniform rhs on [5,15]^2 (INVP). The stream is keyed by
// the instance and `seed`.
sp::ScenarioSet SampleScenarios(const sp::TwoStageProblem& problem, int count, std::uint64_t seed);

// CFLP scenario (probability 1) with the given customer demands.
sp::Scenario CflpScenario(const sp::TwoStageProblem& problem, const std::vector<double>& demand);

// Deterministic INVP scenarios on the k x k tensor grid of [5,15]^2 with
// k = sqrt(count) equally spaced points per axis (the midpoint for k = 1).
// Throws Error(kInvalidModel) unless count is a perfect square >= 1.
sp::ScenarioSet InvpGrid(const sp::TwoStageProblem& problem, int count);

}  // namespace icsp::instances
