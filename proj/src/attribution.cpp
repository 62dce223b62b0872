#include "blame/attribution.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>

#include "blame/lp.hpp"

namespace blame {

namespace {

constexpr double kNegativeTol = 1e-9;
constexpr double kPivotalTol = 1e-9;

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

void require_monotone(const CharacteristicGame& game, const char* who) {
  auto report = validate_game(game);
  if (!report.empty()) throw std::invalid_argument(std::string(who) + ": " + report.front());
}

/// sum over S not containing i of weight[|S|] * (v(S+i) - v(S))
std::vector<double> weighted_marginals(const CharacteristicGame& game,
                                       const std::vector<double>& weight_by_size) {
  const int n = game.num_agents;
  std::vector<double> out(n, 0.0);
  const Coalition full = grand_coalition(n);
  for (int i = 0; i < n; ++i) {
    const Coalition rest = full & ~singleton(i);
    for (Coalition s = rest;; s = (s - 1) & rest) {
      out[i] += weight_by_size[coalition_size(s)] * (game[s | singleton(i)] - game[s]);
      if (s == 0) break;
    }
  }
  return out;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::MER: return "MER";
    case Method::MC: return "MC";
    case Method::SV: return "SV";
    case Method::BI: return "BI";
    case Method::AP: return "AP";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

BlameAssignment make_assignment(std::string method, std::vector<double> blames) {
  BlameAssignment out;
  out.method = std::move(method);
  for (double& b : blames) {
    if (b < -kNegativeTol) {
      std::ostringstream os;
      os << out.method << ": negative blame " << b;
      throw std::logic_error(os.str());
    }
    if (b < 0.0) b = 0.0;
    out.total += b;
  }
  out.blames = std::move(blames);
  return out;
}

std::vector<double> shapley_weights(int num_agents) {
  const std::uint64_t denom = factorial(num_agents);
  std::vector<double> w(num_agents);
  for (int k = 0; k < num_agents; ++k) {
    std::uint64_t num = factorial(k) * factorial(num_agents - k - 1);
    w[k] = static_cast<double>(num) / static_cast<double>(denom);
  }
  return w;
}

double banzhaf_weight(int num_agents) {
  return 1.0 / static_cast<double>(std::uint64_t{1} << (num_agents - 1));
}

BlameAssignment mer(const CharacteristicGame& game, std::optional<int> tiebreak) {
  const int n = game.num_agents;
  if (game.values.size() != (std::size_t{1} << n) || game.values[0] != 0.0) {
    throw std::invalid_argument("mer: malformed game");
  }
  LinearProgram lp;
  lp.objective.assign(n, 1.0);
  for (Coalition s = 1; s < game.values.size(); ++s) {
    LpConstraint c;
    c.coeffs.assign(n, 0.0);
    for (int i : members(s)) c.coeffs[i] = 1.0;
    c.bound = game[s];
    lp.constraints.push_back(std::move(c));
  }
  LpSolution sol = tiebreak ? solve_lexicographic(lp, *tiebreak) : solve(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::logic_error(std::string("mer: LP ") + to_string(sol.status));
  }
  return make_assignment("MER", sol.point);
}

BlameAssignment marginal_contribution(const CharacteristicGame& game) {
  std::vector<double> b(game.num_agents);
  for (int i = 0; i < game.num_agents; ++i) b[i] = game[singleton(i)];
  return make_assignment("MC", std::move(b));
}

BlameAssignment shapley(const CharacteristicGame& game) {
  require_monotone(game, "shapley");
  return make_assignment("SV", weighted_marginals(game, shapley_weights(game.num_agents)));
}

BlameAssignment banzhaf(const CharacteristicGame& game) {
  require_monotone(game, "banzhaf");
  std::vector<double> w(game.num_agents, banzhaf_weight(game.num_agents));
  return make_assignment("BI", weighted_marginals(game, w));
}

Pivotality pivotality(const CharacteristicGame& game) {
  auto sv = shapley(game);
  Pivotality p;
  for (double b : sv.blames) p.flags.push_back(b > kPivotalTol);
  return p;
}

BlameAssignment average_participation(const CharacteristicGame& game) {
  const int n = game.num_agents;
  const auto c = pivotality(game).flags;
  const double w = 1.0 / static_cast<double>((std::uint64_t{1} << n) - 1);
  const Coalition full = grand_coalition(n);
  Coalition pivotal = 0;
  for (int i = 0; i < n; ++i) {
    if (c[i]) pivotal |= singleton(i);
  }
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!c[i]) continue;
    const Coalition rest = full & ~singleton(i);
    for (Coalition s = rest;; s = (s - 1) & rest) {
      b[i] += w * game[s | singleton(i)] / (coalition_size(s & pivotal) + 1);
      if (s == 0) break;
    }
  }
  return make_assignment("AP", std::move(b));
}

BlameAssignment attribute(const CharacteristicGame& game, Method method,
                          std::optional<int> tiebreak) {
  switch (method) {
    case Method::MER: return mer(game, tiebreak);
    case Method::MC: return marginal_contribution(game);
    case Method::SV: return shapley(game);
    case Method::BI: return banzhaf(game);
    case Method::AP: return average_participation(game);
  }
  throw std::invalid_argument("attribute: unknown method");
}

BlameAssignment attribute(const Mmdp& m, const JointPolicy& behavior, Method method,
                          std::optional<int> tiebreak, GameCache* cache) {
  return attribute(characteristic_game(m, behavior, cache), method, tiebreak);
}

}  // namespace blame
