#include <bit>
#include <stdexcept>

#include "blame/envs.hpp"

namespace blame {

namespace {

constexpr int kLevels = 1 << kGraphAgents;
constexpr int kColumns = 4;

bool formation_holds(const GraphSpec& spec, const Mmdp& m, int joint) {
  if (spec.variant == GraphVariant::robustness) return std::popcount(static_cast<unsigned>(joint)) == 2;
  int weight = 0;
  for (int i = 0; i < kGraphAgents; ++i) weight += spec.weights[i] * m.agent_action(joint, i);
  return weight >= spec.thresholds[spec.m - 1];
}

/// Probability agent `i` picks level 1 in column `column` after `levels`.
double robust_level_prob(const GraphSpec& spec, const Mmdp& m, int i, int levels) {
  const double p = spec.persistence[i];
  const int own = m.agent_action(levels, i);
  const int upper = std::popcount(static_cast<unsigned>(levels));
  int target;
  if (upper == kGraphAgents / 2) {
    target = own;
  } else {
    target = upper < kGraphAgents / 2 ? 1 : 0;
  }
  return target == 1 ? p : 1.0 - p;
}

}  // namespace

int graph_state(int column, int levels) { return 1 + (column - 1) * kLevels + levels; }

int graph_column(int state) {
  if (state == kGraphStart) return 0;
  if (state == kGraphTerminal) return kColumns + 1;
  return 1 + (state - 1) / kLevels;
}

std::pair<Mmdp, JointPolicy> build_graph(const GraphSpec& spec) {
  if (spec.variant == GraphVariant::coordination && (spec.m < 1 || spec.m > kGraphAgents)) {
    throw std::invalid_argument("graph: coordination level m must be in 1..4");
  }
  for (double p : spec.persistence) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("graph: persistence must lie in [0, 1]");
  }
  Mmdp m(kGraphStates, std::vector<int>(kGraphAgents, 2), spec.discount);
  for (int s = 0; s < kGraphStates; ++s) {
    if (s == kGraphTerminal) continue;
    const int column = graph_column(s);
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      if (column == kColumns) {
        m.set_reward(s, a, 0.0);
        m.set_transition(s, a, {{kGraphTerminal, 1.0}});
      } else {
        m.set_reward(s, a, formation_holds(spec, m, a) ? 1.0 : -1.0);
        m.set_transition(s, a, {{graph_state(column + 1, a), 1.0}});
      }
    }
  }
  m.set_terminal(kGraphTerminal);
  std::vector<double> sigma(kGraphStates, 0.0);
  sigma[kGraphStart] = 1.0;
  m.set_initial_dist(std::move(sigma));

  JointPolicy behavior;
  for (int i = 0; i < kGraphAgents; ++i) {
    AgentPolicy pi;
    pi.probs.assign(kGraphStates, {1.0, 0.0});
    if (spec.variant == GraphVariant::robustness) {
      for (int s = 0; s < kGraphStates; ++s) {
        const int column = graph_column(s);
        if (column == 0 || column >= kColumns) {
          pi.probs[s] = {0.5, 0.5};
        } else {
          double up = robust_level_prob(spec, m, i, s - graph_state(column, 0));
          pi.probs[s] = {1.0 - up, up};
        }
      }
    }
    behavior.agents.push_back(std::move(pi));
  }
  return {std::move(m), std::move(behavior)};
}

int reachable_state_count(const Mmdp& m) {
  std::vector<char> seen(m.num_states(), 0);
  std::vector<int> stack;
  for (int s = 0; s < m.num_states(); ++s) {
    if (m.initial_dist()[s] > 0.0) {
      seen[s] = 1;
      stack.push_back(s);
    }
  }
  int count = static_cast<int>(stack.size());
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      for (const auto& succ : m.successors(s, a)) {
        if (succ.prob > 0.0 && !seen[succ.state]) {
          seen[succ.state] = 1;
          ++count;
          stack.push_back(succ.state);
        }
      }
    }
  }
  return count;
}

}  // namespace blame
