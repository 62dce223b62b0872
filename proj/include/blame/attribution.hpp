#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blame/mmdp.hpp"
#include "blame/planning.hpp"

namespace blame {

enum class Method { MER, MC, SV, BI, AP };

inline constexpr Method kAllMethods[] = {Method::MER, Method::MC, Method::SV, Method::BI,
                                         Method::AP};

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

struct BlameAssignment {
  std::vector<double> blames;
  std::string method;
  double total = 0.0;
};

/// Builds an assignment, snapping values in [-1e-9, 0) to 0. Anything more
/// negative is a logic error.
BlameAssignment make_assignment(std::string method, std::vector<double> blames);

struct Pivotality {
  std::vector<bool> flags;
};

/// Shapley weight |S|!(n-|S|-1)!/n! for each coalition size |S| < n.
std::vector<double> shapley_weights(int num_agents);
double banzhaf_weight(int num_agents);

/// Maximum efficient rational blame: max sum(beta) s.t. the blame of every
/// coalition is at most its inefficiency. With `tiebreak`, the optimum that
/// gives that agent the most blame is returned.
BlameAssignment mer(const CharacteristicGame& game, std::optional<int> tiebreak = std::nullopt);
BlameAssignment marginal_contribution(const CharacteristicGame& game);
BlameAssignment shapley(const CharacteristicGame& game);
BlameAssignment banzhaf(const CharacteristicGame& game);
/// Agent i is pivotal iff its Shapley value exceeds 1e-9.
Pivotality pivotality(const CharacteristicGame& game);
BlameAssignment average_participation(const CharacteristicGame& game);

BlameAssignment attribute(const CharacteristicGame& game, Method method,
                          std::optional<int> tiebreak = std::nullopt);
BlameAssignment attribute(const Mmdp& m, const JointPolicy& behavior, Method method,
                          std::optional<int> tiebreak = std::nullopt, GameCache* cache = nullptr);

}  // namespace blame
