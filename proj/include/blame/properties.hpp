#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blame/attribution.hpp"
#include "blame/mmdp.hpp"
#include "blame/planning.hpp"

namespace blame {

enum class Property { V, E, R, S, I, CM, PerM, AE, cPerM, cParM, RcParM };

std::string_view property_name(Property p);  // "R_V", "R_cPerM", ...

struct PropertyVerdict {
  Property property = Property::V;
  double epsilon = 0.0;
  bool holds = true;
  std::optional<std::string> witness;
};

/// CSV row `property,epsilon,holds,witness`.
std::string to_csv(const PropertyVerdict& v);
inline constexpr std::string_view kVerdictCsvHeader = "property,epsilon,holds,witness";

using AttributionFn = std::function<BlameAssignment(const CharacteristicGame&)>;
AttributionFn attribution_fn(Method method, std::optional<int> tiebreak = std::nullopt);

PropertyVerdict check_validity(const CharacteristicGame& g, const BlameAssignment& b, double eps);
PropertyVerdict check_efficiency(const CharacteristicGame& g, const BlameAssignment& b, double eps);
PropertyVerdict check_rationality(const CharacteristicGame& g, const BlameAssignment& b, double eps);
PropertyVerdict check_avg_efficiency(const CharacteristicGame& g, const BlameAssignment& b,
                                     double eps);
PropertyVerdict check_symmetry(const CharacteristicGame& g, const BlameAssignment& b, double eps);
PropertyVerdict check_invariance(const CharacteristicGame& g, const BlameAssignment& b, double eps);

PropertyVerdict check_contribution_monotonicity(const CharacteristicGame& g1,
                                                const BlameAssignment& b1,
                                                const CharacteristicGame& g2,
                                                const BlameAssignment& b2, double eps);
PropertyVerdict check_cpart(const CharacteristicGame& g1, const BlameAssignment& b1,
                            const CharacteristicGame& g2, const BlameAssignment& b2, double eps);
PropertyVerdict check_rcpart(const CharacteristicGame& g1, const BlameAssignment& b1,
                             const CharacteristicGame& g2, const BlameAssignment& b2, double eps);

/// Both unilateral deviations of `agent` evaluated against the rest of
/// `behavior`; the agent's own slot in `behavior` is ignored.
struct Deviation {
  double return_pi = 0.0;
  double return_pi_prime = 0.0;
  CharacteristicGame game;
  CharacteristicGame game_prime;
};
Deviation unilateral_deviation(const Mmdp& m, const JointPolicy& behavior, int agent,
                               const AgentPolicy& pi, const AgentPolicy& pi_prime);

PropertyVerdict check_performance_monotonicity(const Mmdp& m, const JointPolicy& behavior,
                                               int agent, const AgentPolicy& pi,
                                               const AgentPolicy& pi_prime,
                                               const AttributionFn& method, double eps);
PropertyVerdict check_cperf(const Mmdp& m, const JointPolicy& behavior, int agent,
                            const AgentPolicy& pi, const AgentPolicy& pi_prime,
                            const AttributionFn& method, double eps);

/// Same checks on precomputed deviation data and assignments.
PropertyVerdict check_performance_monotonicity(const Deviation& d, int agent,
                                               const BlameAssignment& b,
                                               const BlameAssignment& b_prime, double eps);
PropertyVerdict check_cperf(const Deviation& d, int agent, const BlameAssignment& b,
                            const BlameAssignment& b_prime, double eps);

/// Properties each method satisfies exactly, and those it may violate.
std::vector<Property> expected_hold(Method method);
std::vector<Property> may_fail(Method method);

/// Two-agent model on which no method is efficient, symmetric, invariant
/// and performance-monotonic at once.
struct ImpossibilityFixture {
  Mmdp model;
  AgentPolicy behavior_2;
  AgentPolicy pi_1;
  AgentPolicy pi_1_prime;

  JointPolicy behavior() const { return {{pi_1, behavior_2}}; }
  JointPolicy deviated() const { return {{pi_1_prime, behavior_2}}; }
};
ImpossibilityFixture impossibility_fixture();

/// Probability that a generated increment or agent is forced to zero.
inline constexpr double kZeroBias = 0.3;

CharacteristicGame random_monotone_game(int num_agents, std::uint64_t seed);
/// Monotone game in which agents `i` and `j` are interchangeable.
CharacteristicGame random_symmetric_game(int num_agents, int i, int j, std::uint64_t seed);
/// Pair (g1, g2) with g1 = g2 + v for a monotone v supported on g2's pivotal
/// agents, so marginals and participation values of g1 dominate g2's and
/// pivotality agrees.
std::pair<CharacteristicGame, CharacteristicGame> random_dominating_pair(int num_agents,
                                                                         std::uint64_t seed);

struct RandomInstance {
  Mmdp model;
  JointPolicy behavior;
};
/// Small random model with stochastic behavior, for unilateral-deviation checks.
RandomInstance random_instance(int num_agents, std::uint64_t seed);
AgentPolicy random_agent_policy(int num_states, int num_actions, std::uint64_t seed);

/// Moves `b` by a random vector of L1 norm at most `eps`, keeping blames
/// nonnegative.
BlameAssignment perturb(const BlameAssignment& b, double eps, std::uint64_t seed);

}  // namespace blame
