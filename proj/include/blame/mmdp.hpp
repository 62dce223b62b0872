#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blame/coalition.hpp"

namespace blame {

struct Successor {
  int state;
  double prob;
};

/// Finite multi-agent MDP with a factored joint action.
///
/// Joint actions are mixed-radix integers with agent 0 as the most
/// significant digit, so for two agents with |A_0| = 4, |A_1| = 2 the joint
/// action (a0, a1) has index a0 * 2 + a1. Reward and transition tables are
/// indexed by `state * num_joint_actions() + joint`.
class Mmdp {
 public:
  Mmdp() = default;
  Mmdp(int num_states, std::vector<int> action_counts, double discount);

  int num_states() const { return num_states_; }
  int num_agents() const { return static_cast<int>(action_counts_.size()); }
  int num_joint_actions() const { return num_joint_; }
  const std::vector<int>& action_counts() const { return action_counts_; }
  int action_count(int agent) const { return action_counts_[agent]; }
  double discount() const { return discount_; }

  double reward(int s, int joint) const { return rewards_[index(s, joint)]; }
  std::span<const Successor> successors(int s, int joint) const {
    return transitions_[index(s, joint)];
  }
  const std::vector<double>& initial_dist() const { return initial_; }
  bool is_terminal(int s) const { return terminal_[s]; }
  std::vector<int> terminal_states() const;

  void set_reward(int s, int joint, double r);
  /// Replaces the successor distribution of (s, joint).
  void set_transition(int s, int joint, std::vector<Successor> row);
  void add_transition(int s, int joint, int next, double prob);
  void set_initial_dist(std::vector<double> dist);
  /// Marks `s` terminal and installs the zero-reward self-loop.
  void set_terminal(int s);

  int encode(std::span<const int> actions) const;
  std::vector<int> decode(int joint) const;
  int agent_action(int joint, int agent) const;

 private:
  std::size_t index(int s, int joint) const {
    return static_cast<std::size_t>(s) * num_joint_ + joint;
  }

  int num_states_ = 0;
  int num_joint_ = 1;
  std::vector<int> action_counts_;
  std::vector<int> strides_;
  double discount_ = 0.0;
  std::vector<double> rewards_;
  std::vector<std::vector<Successor>> transitions_;
  std::vector<double> initial_;
  std::vector<char> terminal_;
};

/// pi_i(a_i | s), one row per state.
struct AgentPolicy {
  std::vector<std::vector<double>> probs;

  static AgentPolicy deterministic(int num_states, int num_actions, int action);
  static AgentPolicy uniform(int num_states, int num_actions);
};

/// Factorized joint policy: one AgentPolicy per agent.
struct JointPolicy {
  std::vector<AgentPolicy> agents;
};

/// Per-state distribution over joint actions. Products of JointPolicy rows
/// are one instance; the robust module also produces correlated tables.
struct JointDistribution {
  int num_joint = 0;
  std::vector<double> probs;  // state * num_joint + joint

  double at(int s, int joint) const { return probs[static_cast<std::size_t>(s) * num_joint + joint]; }
  std::span<const double> row(int s) const {
    return {probs.data() + static_cast<std::size_t>(s) * num_joint,
            static_cast<std::size_t>(num_joint)};
  }
};

JointDistribution to_joint_distribution(const Mmdp& m, const JointPolicy& pi);

/// Human-readable list of violated model invariants; empty iff valid.
std::vector<std::string> validate_mmdp(const Mmdp& m);

/// Violations of row-stochasticity or shape for `pi` against `m`.
std::vector<std::string> validate_policy(const Mmdp& m, const JointPolicy& pi);

/// Per-state values V^pi.
std::vector<double> evaluate_values(const Mmdp& m, const JointDistribution& pi);

/// Expected discounted return J(pi) = sigma . V^pi.
double evaluate_return(const Mmdp& m, const JointPolicy& pi);
double evaluate_return(const Mmdp& m, const JointDistribution& pi);

/// Iterative evaluation, exposed so tests can compare both solvers.
std::vector<double> evaluate_values_iterative(const Mmdp& m, const JointDistribution& pi,
                                              double tol = 1e-12);

/// All action tuples of the coalition's members, lexicographic with the
/// lowest-numbered member most significant.
std::vector<std::vector<int>> joint_action_iter(const Mmdp& m, Coalition coalition);

/// States in an order where every successor of a state comes before it,
/// ignoring terminal self-loops; empty if the model has cycles.
std::vector<int> reverse_topological_order(const Mmdp& m);

/// Stable content hash over the model's tables.
std::uint64_t content_hash(const Mmdp& m);
std::uint64_t content_hash(const JointDistribution& pi);

}  // namespace blame
