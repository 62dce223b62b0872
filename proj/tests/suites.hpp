#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// binary. Each returns human-readable failures; empty means pass.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "blame/attribution.hpp"
#include "blame/envs.hpp"
#include "blame/properties.hpp"

namespace suites {

using namespace blame;

inline bool expects(Method m, Property p) {
  auto h = expected_hold(m);
  return std::find(h.begin(), h.end(), p) != h.end();
}

inline void note(std::vector<std::string>& out, Method m, const PropertyVerdict& v,
                 const std::string& where) {
  if (!v.holds) {
    out.push_back(std::string(method_name(m)) + " " + std::string(property_name(v.property)) +
                  " " + where + ": " + v.witness.value_or(""));
  }
}

/// Single-game checks of every property the method must satisfy.
inline void check_single(std::vector<std::string>& out, Method m, const CharacteristicGame& g,
                         const BlameAssignment& b, double eps, const std::string& where) {
  if (expects(m, Property::V)) note(out, m, check_validity(g, b, eps), where);
  if (expects(m, Property::E)) note(out, m, check_efficiency(g, b, eps), where);
  if (expects(m, Property::R)) note(out, m, check_rationality(g, b, eps), where);
  if (expects(m, Property::AE)) note(out, m, check_avg_efficiency(g, b, eps), where);
  if (expects(m, Property::S)) note(out, m, check_symmetry(g, b, eps), where);
  if (expects(m, Property::I)) note(out, m, check_invariance(g, b, eps), where);
}

inline void check_pair(std::vector<std::string>& out, Method m, const CharacteristicGame& g1,
                       const BlameAssignment& b1, const CharacteristicGame& g2,
                       const BlameAssignment& b2, double eps, const std::string& where) {
  if (expects(m, Property::CM)) {
    note(out, m, check_contribution_monotonicity(g1, b1, g2, b2, eps), where);
    note(out, m, check_contribution_monotonicity(g2, b2, g1, b1, eps), where);
  }
  if (expects(m, Property::cParM)) note(out, m, check_cpart(g1, b1, g2, b2, eps), where);
  if (expects(m, Property::RcParM)) note(out, m, check_rcpart(g1, b1, g2, b2, eps), where);
}

inline void check_deviation(std::vector<std::string>& out, Method m, const Deviation& d, int agent,
                            const BlameAssignment& b, const BlameAssignment& b_prime, double eps,
                            const std::string& where) {
  if (expects(m, Property::PerM)) {
    note(out, m, check_performance_monotonicity(d, agent, b, b_prime, eps), where);
  }
  if (expects(m, Property::cPerM)) note(out, m, check_cperf(d, agent, b, b_prime, eps), where);
}

inline Deviation random_deviation(std::uint64_t seed, int& agent) {
  const int n = 2 + static_cast<int>(seed % 2);
  auto inst = random_instance(n, seed);
  agent = static_cast<int>(seed % n);
  const int states = inst.model.num_states();
  const int actions = inst.model.action_count(agent);
  auto pi = random_agent_policy(states, actions, seed * 7 + 1);
  auto pi_prime = random_agent_policy(states, actions, seed * 7 + 2);
  return unilateral_deviation(inst.model, inst.behavior, agent, pi, pi_prime);
}

/// Expected-hold cells of the verdict matrix over `games` random instances.
inline std::vector<std::string> verdict_matrix(int games, std::uint64_t seed0) {
  std::vector<std::string> out;
  for (int k = 0; k < games; ++k) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(k);
    const int n = 2 + k % 5;
    const std::string where = "seed " + std::to_string(seed);
    auto g = random_monotone_game(n, seed);
    auto sym = random_symmetric_game(n, 0, n - 1, seed);
    auto [big, small] = random_dominating_pair(n, seed);
    auto other = random_monotone_game(n, seed + 7919);
    int agent = 0;
    auto dev = random_deviation(seed, agent);
    for (Method m : kAllMethods) {
      check_single(out, m, g, attribute(g, m), 0.0, where);
      check_single(out, m, sym, attribute(sym, m), 0.0, where + " symmetric");
      check_pair(out, m, big, attribute(big, m), small, attribute(small, m), 0.0,
                 where + " dominating");
      check_pair(out, m, g, attribute(g, m), other, attribute(other, m), 0.0, where + " unrelated");
      check_deviation(out, m, dev, agent, attribute(dev.game, m), attribute(dev.game_prime, m), 0.0,
                      where + " deviation");
    }
  }
  return out;
}

/// Every assignment within L1 eps of an exact output keeps the exact
/// guarantees at eps (single-game) or 2 eps (pairwise).
inline std::vector<std::string> transfer_suite(int pairs, std::uint64_t seed0) {
  std::vector<std::string> out;
  const double levels[] = {1e-3, 1e-2, 5e-2, 0.1};
  for (int k = 0; k < pairs; ++k) {
    const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(k);
    const Method m = kAllMethods[k % std::size(kAllMethods)];
    const double eps = levels[(k / std::size(kAllMethods)) % std::size(levels)];
    const int n = 2 + k % 4;
    const std::string where = "seed " + std::to_string(seed) + " eps " + std::to_string(eps);
    auto g = random_monotone_game(n, seed);
    auto sym = random_symmetric_game(n, 0, 1, seed);
    auto [big, small] = random_dominating_pair(n, seed);
    auto noisy = [&](const CharacteristicGame& game, std::uint64_t salt) {
      return perturb(attribute(game, m), eps, seed * 31 + salt);
    };
    check_single(out, m, g, noisy(g, 1), eps, where);
    check_single(out, m, sym, noisy(sym, 2), eps, where + " symmetric");
    check_pair(out, m, big, noisy(big, 3), small, noisy(small, 4), 2 * eps, where + " dominating");
    int agent = 0;
    auto dev = random_deviation(seed, agent);
    check_deviation(out, m, dev, agent, noisy(dev.game, 5), noisy(dev.game_prime, 6), 2 * eps,
                    where + " deviation");
  }
  return out;
}

/// One failing instance per may-fail cell of the matrix.
struct MayFailWitness {
  Method method;
  Property property;
  PropertyVerdict verdict;
};

inline std::vector<MayFailWitness> may_fail_witnesses() {
  std::vector<MayFailWitness> out;
  const auto fx = impossibility_fixture();
  const auto dev = unilateral_deviation(fx.model, fx.behavior(), 0, fx.pi_1, fx.pi_1_prime);
  GraphSpec spec;
  spec.m = 2;
  auto [graph, graph_behavior] = build_graph(spec);
  const auto graph_game = characteristic_game(graph, graph_behavior);
  // Only the grand coalition is inefficient.
  CharacteristicGame unanimity = zero_game(3);
  unanimity.values.back() = 1.0;

  auto perm = [&](Method m) {
    return check_performance_monotonicity(dev, 0, attribute(dev.game, m),
                                          attribute(dev.game_prime, m), 0.0);
  };
  out.push_back({Method::MC, Property::V,
                 check_validity(dev.game, attribute(dev.game, Method::MC), 0.0)});
  out.push_back({Method::SV, Property::PerM, perm(Method::SV)});
  out.push_back({Method::SV, Property::R,
                 check_rationality(unanimity, attribute(unanimity, Method::SV), 0.0)});
  out.push_back({Method::BI, Property::V,
                 check_validity(graph_game, attribute(graph_game, Method::BI), 0.0)});
  out.push_back({Method::BI, Property::E,
                 check_efficiency(graph_game, attribute(graph_game, Method::BI), 0.0)});
  out.push_back({Method::BI, Property::PerM, perm(Method::BI)});
  return out;
}

}  // namespace suites
