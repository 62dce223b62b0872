#include "blame/planning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blame/parallel.hpp"

namespace blame {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kTieTol = 1e-11;
constexpr double kMonotoneTol = 1e-9;

long iteration_cap(double gamma) {
  if (gamma <= 0.0) return 10;
  return std::max(10L, 10 * static_cast<long>(std::ceil(std::log(1e-12) / std::log(gamma))));
}

std::vector<int> sweep_order(const Mmdp& m) {
  auto order = reverse_topological_order(m);
  if (order.empty()) {
    order.resize(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) order[s] = s;
  }
  return order;
}

}  // namespace

namespace detail {

CoalitionSplit split_joint_actions(const Mmdp& m, Coalition coalition) {
  if (coalition >> m.num_agents()) throw std::out_of_range("coalition refers to unknown agent");
  CoalitionSplit split;
  const int joint = m.num_joint_actions();
  split.coalition_index.assign(joint, 0);
  split.complement_index.assign(joint, 0);
  for (int i = 0; i < m.num_agents(); ++i) {
    (contains(coalition, i) ? split.coalition_actions : split.complement_actions) *=
        m.action_count(i);
  }
  for (int a = 0; a < joint; ++a) {
    int c = 0, d = 0;
    for (int i = 0; i < m.num_agents(); ++i) {
      int ai = m.agent_action(a, i);
      if (contains(coalition, i)) {
        c = c * m.action_count(i) + ai;
      } else {
        d = d * m.action_count(i) + ai;
      }
    }
    split.coalition_index[a] = c;
    split.complement_index[a] = d;
  }
  return split;
}

}  // namespace detail

CharacteristicGame zero_game(int num_agents) {
  CharacteristicGame g;
  g.num_agents = num_agents;
  g.values.assign(std::size_t{1} << num_agents, 0.0);
  return g;
}

std::vector<std::string> validate_game(const CharacteristicGame& game) {
  std::vector<std::string> report;
  if (game.num_agents < 1 || game.num_agents > kMaxAgents) {
    report.push_back("agent count must be in [1, 12]");
    return report;
  }
  if (game.values.size() != (std::size_t{1} << game.num_agents)) {
    report.push_back("game table must have 2^n entries");
    return report;
  }
  if (game.values[0] != 0.0) report.push_back("value of the empty coalition must be 0");
  for (Coalition s = 0; s < game.values.size(); ++s) {
    if (!std::isfinite(game.values[s])) {
      report.push_back("value of coalition " + std::to_string(s) + " is not finite");
      continue;
    }
    for (int i = 0; i < game.num_agents; ++i) {
      if (contains(s, i)) continue;
      Coalition t = s | singleton(i);
      if (game.values[s] > game.values[t] + kMonotoneTol) {
        std::ostringstream os;
        os << "not monotone: value(" << s << ") = " << game.values[s] << " > value(" << t
           << ") = " << game.values[t];
        report.push_back(os.str());
      }
    }
  }
  return report;
}

BestResponse best_response(const Mmdp& m, const JointDistribution& behavior, Coalition coalition) {
  if (behavior.num_joint != m.num_joint_actions()) {
    throw std::invalid_argument("best_response: behavior table shape does not match model");
  }
  const auto split = detail::split_joint_actions(m, coalition);
  const int n_states = m.num_states();
  const int n_joint = m.num_joint_actions();
  const int n_coal = split.coalition_actions;
  const double gamma = m.discount();

  // Complement marginal per state.
  std::vector<double> marginal(static_cast<std::size_t>(n_states) * split.complement_actions, 0.0);
  for (int s = 0; s < n_states; ++s) {
    auto row = behavior.row(s);
    double* out = marginal.data() + static_cast<std::size_t>(s) * split.complement_actions;
    for (int a = 0; a < n_joint; ++a) out[split.complement_index[a]] += row[a];
  }

  std::vector<double> v(n_states, 0.0);
  std::vector<double> q(n_coal);
  auto backup = [&](int s) {
    std::fill(q.begin(), q.end(), 0.0);
    const double* marg = marginal.data() + static_cast<std::size_t>(s) * split.complement_actions;
    for (int a = 0; a < n_joint; ++a) {
      double w = marg[split.complement_index[a]];
      if (w == 0.0) continue;
      double next = 0.0;
      for (const auto& succ : m.successors(s, a)) next += succ.prob * v[succ.state];
      q[split.coalition_index[a]] += w * (m.reward(s, a) + gamma * next);
    }
  };

  const auto order = sweep_order(m);
  const long cap = iteration_cap(gamma);
  for (long it = 0; it < cap; ++it) {
    double residual = 0.0;
    for (int s : order) {
      backup(s);
      double best = *std::max_element(q.begin(), q.end());
      residual = std::max(residual, std::abs(best - v[s]));
      v[s] = best;
    }
    if (residual <= kResidualTol) break;
  }

  BestResponse br;
  br.coalition = coalition;
  br.actions.assign(n_states, 0);
  for (int s = 0; s < n_states; ++s) {
    backup(s);
    double best = *std::max_element(q.begin(), q.end());
    for (int c = 0; c < n_coal; ++c) {
      if (q[c] >= best - kTieTol) {
        br.actions[s] = c;
        break;
      }
    }
  }
  br.behavior.num_joint = n_joint;
  br.behavior.probs.assign(behavior.probs.size(), 0.0);
  for (int s = 0; s < n_states; ++s) {
    const double* marg = marginal.data() + static_cast<std::size_t>(s) * split.complement_actions;
    double* out = br.behavior.probs.data() + static_cast<std::size_t>(s) * n_joint;
    for (int a = 0; a < n_joint; ++a) {
      if (split.coalition_index[a] == br.actions[s]) out[a] = marg[split.complement_index[a]];
    }
  }
  br.value = evaluate_return(m, br.behavior);
  return br;
}

BestResponse best_response(const Mmdp& m, const JointPolicy& behavior, Coalition coalition) {
  return best_response(m, to_joint_distribution(m, behavior), coalition);
}

BestResponse optimal_joint(const Mmdp& m) {
  JointPolicy any;
  for (int i = 0; i < m.num_agents(); ++i) {
    any.agents.push_back(AgentPolicy::uniform(m.num_states(), m.action_count(i)));
  }
  return best_response(m, any, grand_coalition(m.num_agents()));
}

JointPolicy with_best_response(const Mmdp& m, const JointPolicy& behavior, const BestResponse& br) {
  JointPolicy out = behavior;
  const auto mem = members(br.coalition);
  for (int s = 0; s < m.num_states(); ++s) {
    int c = br.actions[s];
    for (int k = static_cast<int>(mem.size()) - 1; k >= 0; --k) {
      int agent = mem[k];
      int count = m.action_count(agent);
      auto& row = out.agents[agent].probs[s];
      std::fill(row.begin(), row.end(), 0.0);
      row[c % count] = 1.0;
      c /= count;
    }
  }
  return out;
}

bool GameCache::lookup(std::uint64_t key, CharacteristicGame& out) const {
  std::shared_lock lock(mu_);
  auto it = games_.find(key);
  if (it == games_.end()) return false;
  out = it->second;
  return true;
}

void GameCache::insert(std::uint64_t key, const CharacteristicGame& game) {
  std::unique_lock lock(mu_);
  games_.emplace(key, game);
}

std::size_t GameCache::size() const {
  std::shared_lock lock(mu_);
  return games_.size();
}

CharacteristicGame characteristic_game(const Mmdp& m, const JointDistribution& behavior,
                                       GameCache* cache) {
  std::uint64_t key = 0;
  if (cache) {
    key = content_hash(m) * 1000003u ^ content_hash(behavior);
    CharacteristicGame hit;
    if (cache->lookup(key, hit)) return hit;
  }
  const int n = m.num_agents();
  const double baseline = evaluate_return(m, behavior);
  CharacteristicGame game = zero_game(n);
  const std::size_t count = game.values.size();
  parallel_for(count - 1, [&](std::size_t k) {
    Coalition s = static_cast<Coalition>(k + 1);
    game.values[s] = best_response(m, behavior, s).value - baseline;
  });
  for (std::size_t s = 1; s < count; ++s) {
    double& v = game.values[s];
    if (v < -kMonotoneTol) {
      std::ostringstream os;
      os << "coalition " << s << " best response is worse than behavior by " << -v;
      throw std::logic_error(os.str());
    }
    if (v < 0.0) v = 0.0;
  }
  if (cache) cache->insert(key, game);
  return game;
}

CharacteristicGame characteristic_game(const Mmdp& m, const JointPolicy& behavior,
                                       GameCache* cache) {
  return characteristic_game(m, to_joint_distribution(m, behavior), cache);
}

std::pair<Mmdp, JointPolicy> mmdp_from_game(const CharacteristicGame& f) {
  auto report = validate_game(f);
  if (!report.empty()) throw std::invalid_argument("mmdp_from_game: " + report.front());
  const int n = f.num_agents;
  Mmdp m(2, std::vector<int>(n, 2), 0.99);
  m.set_initial_dist({1.0, 0.0});
  for (int a = 0; a < m.num_joint_actions(); ++a) {
    Coalition playing = 0;
    for (int i = 0; i < n; ++i) {
      if (m.agent_action(a, i) == 1) playing |= singleton(i);
    }
    m.set_reward(0, a, f[playing]);
    m.set_transition(0, a, {{1, 1.0}});
  }
  m.set_terminal(1);
  JointPolicy behavior;
  for (int i = 0; i < n; ++i) behavior.agents.push_back(AgentPolicy::deterministic(2, 2, 0));
  return {std::move(m), std::move(behavior)};
}

}  // namespace blame
