#include "blame/properties.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

namespace blame {

namespace {

constexpr double kPremiseTol = 1e-9;
constexpr double kSlack = 1e-12;
constexpr double kReturnTol = 1e-12;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

PropertyVerdict pass(Property p, double eps) { return {p, eps, true, std::nullopt}; }
PropertyVerdict fail(Property p, double eps, std::string witness) {
  return {p, eps, false, std::move(witness)};
}

void require_same_shape(const CharacteristicGame& g, const BlameAssignment& b) {
  if (b.blames.size() != static_cast<std::size_t>(g.num_agents)) {
    throw std::invalid_argument("blame vector does not match game size");
  }
}

double sum_over(const BlameAssignment& b, Coalition s) {
  double acc = 0.0;
  for (int i : members(s)) acc += b.blames[i];
  return acc;
}

/// Every subset of the agents other than those in `excluded`.
template <class Fn>
bool all_subsets_without(int n, Coalition excluded, Fn&& fn) {
  const Coalition rest = grand_coalition(n) & ~excluded;
  for (Coalition s = rest;; s = (s - 1) & rest) {
    if (!fn(s)) return false;
    if (s == 0) break;
  }
  return true;
}

bool is_null_player(const CharacteristicGame& g, int i) {
  return all_subsets_without(g.num_agents, singleton(i), [&](Coalition s) {
    return std::abs(g[s | singleton(i)] - g[s]) <= kPremiseTol;
  });
}

bool interchangeable(const CharacteristicGame& g, int i, int j) {
  return all_subsets_without(g.num_agents, singleton(i) | singleton(j), [&](Coalition s) {
    return std::abs(g[s | singleton(i)] - g[s | singleton(j)]) <= kPremiseTol;
  });
}

bool same_pivotality(const CharacteristicGame& g1, const CharacteristicGame& g2) {
  return pivotality(g1).flags == pivotality(g2).flags;
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

CharacteristicGame increments_game(int n, Coalition active, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CharacteristicGame g = zero_game(n);
  for (Coalition s = 1; s < g.values.size(); ++s) {
    double base = 0.0;
    for (int i : members(s)) base = std::max(base, g[s & ~singleton(i)]);
    double inc = unit(rng) < kZeroBias ? 0.0 : unit(rng);
    g.values[s] = base + inc;
  }
  // Inactive agents are null players: project onto the active ones.
  CharacteristicGame out = zero_game(n);
  for (Coalition s = 0; s < g.values.size(); ++s) out.values[s] = g[s & active];
  return out;
}

std::vector<double> random_row(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> row(k);
  double total = 0.0;
  for (double& p : row) total += (p = e(rng));
  for (double& p : row) p /= total;
  return row;
}

}  // namespace

std::string_view property_name(Property p) {
  switch (p) {
    case Property::V: return "R_V";
    case Property::E: return "R_E";
    case Property::R: return "R_R";
    case Property::S: return "R_S";
    case Property::I: return "R_I";
    case Property::CM: return "R_CM";
    case Property::PerM: return "R_PerM";
    case Property::AE: return "R_AE";
    case Property::cPerM: return "R_cPerM";
    case Property::cParM: return "R_cParM";
    case Property::RcParM: return "R_RcParM";
  }
  return "?";
}

std::string to_csv(const PropertyVerdict& v) {
  std::string witness = v.witness.value_or("");
  for (char& c : witness) {
    if (c == ',' || c == '\n') c = ';';
  }
  return std::string(property_name(v.property)) + "," + num(v.epsilon) + "," +
         (v.holds ? "true" : "false") + "," + witness;
}

AttributionFn attribution_fn(Method method, std::optional<int> tiebreak) {
  return [method, tiebreak](const CharacteristicGame& g) { return attribute(g, method, tiebreak); };
}

PropertyVerdict check_validity(const CharacteristicGame& g, const BlameAssignment& b, double eps) {
  require_same_shape(g, b);
  double total = sum_over(b, grand_coalition(g.num_agents));
  if (total <= g.total() + eps + kSlack) return pass(Property::V, eps);
  return fail(Property::V, eps, "total " + num(total) + " > inefficiency " + num(g.total()));
}

PropertyVerdict check_efficiency(const CharacteristicGame& g, const BlameAssignment& b,
                                 double eps) {
  require_same_shape(g, b);
  double total = sum_over(b, grand_coalition(g.num_agents));
  if (std::abs(total - g.total()) <= eps + kSlack) return pass(Property::E, eps);
  return fail(Property::E, eps, "total " + num(total) + " != inefficiency " + num(g.total()));
}

PropertyVerdict check_rationality(const CharacteristicGame& g, const BlameAssignment& b,
                                  double eps) {
  require_same_shape(g, b);
  for (Coalition s = 1; s < g.values.size(); ++s) {
    double blame = sum_over(b, s);
    if (blame > g[s] + eps + kSlack) {
      return fail(Property::R, eps,
                  "coalition " + std::to_string(s) + " blame " + num(blame) + " > " + num(g[s]));
    }
  }
  return pass(Property::R, eps);
}

PropertyVerdict check_avg_efficiency(const CharacteristicGame& g, const BlameAssignment& b,
                                     double eps) {
  require_same_shape(g, b);
  double acc = 0.0;
  for (Coalition s = 1; s < g.values.size(); ++s) acc += g[s];
  double mean = acc / static_cast<double>(g.values.size() - 1);
  double total = sum_over(b, grand_coalition(g.num_agents));
  if (std::abs(total - mean) <= eps + kSlack) return pass(Property::AE, eps);
  return fail(Property::AE, eps, "total " + num(total) + " != mean inefficiency " + num(mean));
}

PropertyVerdict check_symmetry(const CharacteristicGame& g, const BlameAssignment& b, double eps) {
  require_same_shape(g, b);
  for (int i = 0; i < g.num_agents; ++i) {
    for (int j = i + 1; j < g.num_agents; ++j) {
      if (!interchangeable(g, i, j)) continue;
      if (std::abs(b.blames[i] - b.blames[j]) > eps + kSlack) {
        return fail(Property::S, eps,
                    "agents (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") blames " + num(b.blames[i]) + " vs " + num(b.blames[j]));
      }
    }
  }
  return pass(Property::S, eps);
}

PropertyVerdict check_invariance(const CharacteristicGame& g, const BlameAssignment& b,
                                 double eps) {
  require_same_shape(g, b);
  for (int i = 0; i < g.num_agents; ++i) {
    if (is_null_player(g, i) && b.blames[i] > eps + kSlack) {
      return fail(Property::I, eps,
                  "agent " + std::to_string(i + 1) + " never contributes but has blame " +
                      num(b.blames[i]));
    }
  }
  return pass(Property::I, eps);
}

PropertyVerdict check_contribution_monotonicity(const CharacteristicGame& g1,
                                                const BlameAssignment& b1,
                                                const CharacteristicGame& g2,
                                                const BlameAssignment& b2, double eps) {
  require_same_shape(g1, b1);
  require_same_shape(g2, b2);
  if (g1.num_agents != g2.num_agents) throw std::invalid_argument("game sizes differ");
  for (int i = 0; i < g1.num_agents; ++i) {
    bool premise = all_subsets_without(g1.num_agents, singleton(i), [&](Coalition s) {
      Coalition t = s | singleton(i);
      return g1[t] - g1[s] >= g2[t] - g2[s] - kPremiseTol;
    });
    if (premise && b1.blames[i] < b2.blames[i] - eps - kSlack) {
      return fail(Property::CM, eps,
                  "agent " + std::to_string(i + 1) + " contributes more but blame " +
                      num(b1.blames[i]) + " < " + num(b2.blames[i]));
    }
  }
  return pass(Property::CM, eps);
}

PropertyVerdict check_cpart(const CharacteristicGame& g1, const BlameAssignment& b1,
                            const CharacteristicGame& g2, const BlameAssignment& b2, double eps) {
  require_same_shape(g1, b1);
  require_same_shape(g2, b2);
  if (!same_pivotality(g1, g2)) return pass(Property::cParM, eps);
  for (int j = 0; j < g1.num_agents; ++j) {
    bool premise = all_subsets_without(g1.num_agents, singleton(j), [&](Coalition s) {
      Coalition t = s | singleton(j);
      return g1[t] >= g2[t] - kPremiseTol;
    });
    if (premise && b1.blames[j] < b2.blames[j] - eps - kSlack) {
      return fail(Property::cParM, eps,
                  "agent " + std::to_string(j + 1) + " participates in larger inefficiencies "
                  "but blame " + num(b1.blames[j]) + " < " + num(b2.blames[j]));
    }
  }
  return pass(Property::cParM, eps);
}

PropertyVerdict check_rcpart(const CharacteristicGame& g1, const BlameAssignment& b1,
                             const CharacteristicGame& g2, const BlameAssignment& b2, double eps) {
  require_same_shape(g1, b1);
  require_same_shape(g2, b2);
  if (!same_pivotality(g1, g2)) return pass(Property::RcParM, eps);
  const auto c = pivotality(g1).flags;
  const int n = g1.num_agents;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k || c[j] != c[k]) continue;
      bool premise = all_subsets_without(n, singleton(j) | singleton(k), [&](Coalition s) {
        Coalition sj = s | singleton(j), sk = s | singleton(k);
        return g1[sj] - g2[sj] >= g1[sk] - g2[sk] - kPremiseTol;
      });
      if (!premise) continue;
      double inc_j = b1.blames[j] - b2.blames[j];
      double inc_k = b1.blames[k] - b2.blames[k];
      if (inc_j < inc_k - eps - kSlack) {
        return fail(Property::RcParM, eps,
                    "agents (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                        ") blame increases " + num(inc_j) + " < " + num(inc_k));
      }
    }
  }
  return pass(Property::RcParM, eps);
}

Deviation unilateral_deviation(const Mmdp& m, const JointPolicy& behavior, int agent,
                               const AgentPolicy& pi, const AgentPolicy& pi_prime) {
  if (agent < 0 || agent >= m.num_agents()) throw std::out_of_range("agent out of range");
  JointPolicy a = behavior, b = behavior;
  a.agents[agent] = pi;
  b.agents[agent] = pi_prime;
  Deviation d;
  d.return_pi = evaluate_return(m, a);
  d.return_pi_prime = evaluate_return(m, b);
  d.game = characteristic_game(m, a);
  d.game_prime = characteristic_game(m, b);
  return d;
}

PropertyVerdict check_performance_monotonicity(const Deviation& d, int agent,
                                               const BlameAssignment& b,
                                               const BlameAssignment& b_prime, double eps) {
  if (d.return_pi > d.return_pi_prime + kReturnTol) return pass(Property::PerM, eps);
  if (b.blames[agent] < b_prime.blames[agent] - eps - kSlack) {
    return fail(Property::PerM, eps,
                "agent " + std::to_string(agent + 1) + " return " + num(d.return_pi) +
                    " <= " + num(d.return_pi_prime) + " but blame " + num(b.blames[agent]) +
                    " < " + num(b_prime.blames[agent]));
  }
  return pass(Property::PerM, eps);
}

PropertyVerdict check_cperf(const Deviation& d, int agent, const BlameAssignment& b,
                            const BlameAssignment& b_prime, double eps) {
  if (!same_pivotality(d.game, d.game_prime)) return pass(Property::cPerM, eps);
  auto v = check_performance_monotonicity(d, agent, b, b_prime, eps);
  v.property = Property::cPerM;
  return v;
}

PropertyVerdict check_performance_monotonicity(const Mmdp& m, const JointPolicy& behavior,
                                               int agent, const AgentPolicy& pi,
                                               const AgentPolicy& pi_prime,
                                               const AttributionFn& method, double eps) {
  auto d = unilateral_deviation(m, behavior, agent, pi, pi_prime);
  return check_performance_monotonicity(d, agent, method(d.game), method(d.game_prime), eps);
}

PropertyVerdict check_cperf(const Mmdp& m, const JointPolicy& behavior, int agent,
                            const AgentPolicy& pi, const AgentPolicy& pi_prime,
                            const AttributionFn& method, double eps) {
  auto d = unilateral_deviation(m, behavior, agent, pi, pi_prime);
  return check_cperf(d, agent, method(d.game), method(d.game_prime), eps);
}

std::vector<Property> expected_hold(Method method) {
  using P = Property;
  switch (method) {
    case Method::MER: return {P::V, P::R, P::I};
    case Method::MC: return {P::S, P::I, P::CM, P::PerM};
    case Method::SV: return {P::V, P::E, P::S, P::I, P::CM};
    case Method::BI: return {P::S, P::I, P::CM};
    case Method::AP: return {P::V, P::AE, P::S, P::I, P::cPerM, P::cParM, P::RcParM};
  }
  return {};
}

std::vector<Property> may_fail(Method method) {
  using P = Property;
  switch (method) {
    case Method::MER: return {};
    case Method::MC: return {P::V};
    case Method::SV: return {P::PerM, P::R};
    case Method::BI: return {P::E, P::V, P::PerM};
    case Method::AP: return {};
  }
  return {};
}

ImpossibilityFixture impossibility_fixture() {
  Mmdp m(2, {3, 3}, 0.99);
  m.set_initial_dist({1.0, 0.0});
  for (int a1 = 0; a1 < 3; ++a1) {
    for (int a2 = 0; a2 < 3; ++a2) {
      int joint = m.encode(std::vector<int>{a1, a2});
      double r = 0.9;
      if (a1 == 0 && a2 == 0) {
        r = 0.0;
      } else if ((a1 == 0 && a2 == 2) || (a1 == 2 && a2 == 0) || (a1 == 2 && a2 == 2)) {
        r = 2.0;
      }
      m.set_reward(0, joint, r);
      m.set_transition(0, joint, {{1, 1.0}});
    }
  }
  m.set_terminal(1);
  ImpossibilityFixture f;
  f.model = std::move(m);
  f.behavior_2 = AgentPolicy::deterministic(2, 3, 0);
  f.pi_1 = AgentPolicy::deterministic(2, 3, 0);
  f.pi_1_prime = AgentPolicy::deterministic(2, 3, 1);
  return f;
}

CharacteristicGame random_monotone_game(int num_agents, std::uint64_t seed) {
  if (num_agents < 1 || num_agents > kMaxAgents) {
    throw std::invalid_argument("random_monotone_game: agent count out of range");
  }
  auto rng = rng_for(seed, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Coalition active = 0;
  for (int i = 0; i < num_agents; ++i) {
    if (unit(rng) >= kZeroBias) active |= singleton(i);
  }
  return increments_game(num_agents, active, rng);
}

CharacteristicGame random_symmetric_game(int num_agents, int i, int j, std::uint64_t seed) {
  auto g = random_monotone_game(num_agents, seed);
  auto swap = [&](Coalition s) {
    bool has_i = contains(s, i), has_j = contains(s, j);
    s &= ~(singleton(i) | singleton(j));
    if (has_i) s |= singleton(j);
    if (has_j) s |= singleton(i);
    return s;
  };
  CharacteristicGame out = zero_game(num_agents);
  for (Coalition s = 0; s < g.values.size(); ++s) out.values[s] = std::max(g[s], g[swap(s)]);
  return out;
}

std::pair<CharacteristicGame, CharacteristicGame> random_dominating_pair(int num_agents,
                                                                         std::uint64_t seed) {
  CharacteristicGame base = random_monotone_game(num_agents, seed);
  const auto flags = pivotality(base).flags;
  Coalition pivotal = 0;
  for (int i = 0; i < num_agents; ++i) {
    if (flags[i]) pivotal |= singleton(i);
  }
  auto rng = rng_for(seed, 2);
  CharacteristicGame extra = increments_game(num_agents, pivotal, rng);
  CharacteristicGame bigger = base;
  for (std::size_t s = 0; s < bigger.values.size(); ++s) bigger.values[s] += extra.values[s];
  return {bigger, base};
}

AgentPolicy random_agent_policy(int num_states, int num_actions, std::uint64_t seed) {
  auto rng = rng_for(seed, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AgentPolicy p;
  for (int s = 0; s < num_states; ++s) {
    if (unit(rng) < kZeroBias) {
      std::vector<double> row(num_actions, 0.0);
      row[std::uniform_int_distribution<int>(0, num_actions - 1)(rng)] = 1.0;
      p.probs.push_back(std::move(row));
    } else {
      p.probs.push_back(random_row(num_actions, rng));
    }
  }
  return p;
}

RandomInstance random_instance(int num_agents, std::uint64_t seed) {
  auto rng = rng_for(seed, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> actions(2, 3);
  std::vector<int> counts(num_agents);
  for (int& c : counts) c = actions(rng);
  const int live = 3;
  const int terminal = live;
  Mmdp m(live + 1, counts, 0.9);
  std::vector<double> sigma = random_row(live, rng);
  sigma.push_back(0.0);
  m.set_initial_dist(sigma);
  for (int s = 0; s < live; ++s) {
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      m.set_reward(s, a, unit(rng) < kZeroBias ? 0.0 : 2.0 * unit(rng) - 1.0);
      auto row = random_row(live + 1, rng);
      std::vector<Successor> succ;
      double kept = 0.0;
      for (int t = 0; t < live; ++t) {
        if (row[t] > 0.15) {
          succ.push_back({t, row[t]});
          kept += row[t];
        }
      }
      succ.push_back({terminal, 1.0 - kept});
      m.set_transition(s, a, std::move(succ));
    }
  }
  m.set_terminal(terminal);
  RandomInstance inst;
  inst.model = std::move(m);
  for (int i = 0; i < num_agents; ++i) {
    inst.behavior.agents.push_back(
        random_agent_policy(live + 1, counts[i], seed * 131 + static_cast<std::uint64_t>(i)));
  }
  return inst;
}

BlameAssignment perturb(const BlameAssignment& b, double eps, std::uint64_t seed) {
  auto rng = rng_for(seed, 5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> delta(b.blames.size());
  double norm = 0.0;
  for (double& d : delta) norm += std::abs(d = unit(rng));
  double scale = norm > 0.0 ? eps * (0.5 + 0.5 * std::abs(unit(rng))) / norm : 0.0;
  std::vector<double> out(b.blames.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(0.0, b.blames[i] + scale * delta[i]);
  }
  return make_assignment(b.method, std::move(out));
}

}  // namespace blame
