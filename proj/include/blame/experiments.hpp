#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blame/attribution.hpp"
#include "blame/envs.hpp"
#include "blame/uncertainty.hpp"

namespace blame {

// A_2's blame as its model of A_1 sweeps away from the truth.

struct PermRow {
  double alpha_prime = 0.0;
  std::vector<BlameAssignment> blames;  // one per method, kAllMethods order
};

std::vector<double> alpha_prime_grid();
std::vector<PermRow> run_perm_experiment(const GridworldSpec& base,
                                         const std::vector<double>& alpha_primes);
void write_perm_csv(std::ostream& out, const std::vector<PermRow>& rows);

// Total blame per method as the coordination level rises.

struct CoordinationRow {
  int m = 0;
  double delta = 0.0;
  std::vector<BlameAssignment> blames;
};

std::vector<CoordinationRow> run_coordination_experiment(const GraphSpec& base = {});
void write_coordination_csv(std::ostream& out, const std::vector<CoordinationRow>& rows);

// Robust attribution against sampled uncertainty sets.

struct RobustnessConfig {
  std::vector<double> eps_levels;
  int seeds = 10;
  std::uint64_t seed = 0;
  RobustMode mode = RobustMode::exact;
  /// MER tiebreak agent; none reports totals only.
  std::optional<int> mer_tiebreak;
};

std::vector<double> gridworld_eps_grid();
std::vector<double> graph_eps_grid();

struct RobustnessRow {
  double eps_max = 0.0;
  int seed = 0;
  BlameAssignment blame;
  double l1_to_truth = 0.0;
  bool consistent = true;
};

struct RobustnessResult {
  int num_agents = 0;
  double delta = 0.0;
  /// Full-information assignments keyed by method name (SV, BI, MC, MER, AP).
  std::vector<BlameAssignment> truth;
  std::vector<RobustnessRow> rows;
};

/// Method tags in output order.
const std::vector<std::string>& robust_method_tags();

struct RobustInstance {
  Mmdp model;
  JointPolicy truth;
  /// Per-agent radius as a multiple of eps_max.
  std::vector<double> radius_scale;
  std::optional<int> mer_tiebreak;
};

RobustInstance gridworld_robust_instance();
RobustInstance graph_robust_instance();

RobustnessResult run_robustness_experiment(const RobustInstance& instance,
                                           const RobustnessConfig& config);
void write_robustness_csv(std::ostream& out, const RobustnessResult& result);
/// Mean and sample standard deviation across seeds per (method, eps_max).
void write_robustness_summary(std::ostream& out, const RobustnessResult& result);

struct SummaryStat {
  double mean = 0.0;
  double stddev = 0.0;
};
SummaryStat summarize(const std::vector<double>& xs);

/// Seed-averaged total for one method and level.
double mean_total(const RobustnessResult& result, const std::string& method, double eps_max);
double mean_l1(const RobustnessResult& result, const std::string& method, double eps_max);
std::vector<double> mean_blames(const RobustnessResult& result, const std::string& method,
                                double eps_max);

}  // namespace blame
