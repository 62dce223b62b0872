#include "blame/mmdp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace blame {

namespace {

constexpr double kRowTol = 1e-12;
constexpr int kDirectSolveLimit = 2000;

class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 1099511628211ull;
    }
  }
  template <class T>
  void add(const T& v) { add_bytes(&v, sizeof(T)); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

}  // namespace

Mmdp::Mmdp(int num_states, std::vector<int> action_counts, double discount)
    : num_states_(num_states), action_counts_(std::move(action_counts)), discount_(discount) {
  if (num_states <= 0) throw std::invalid_argument("Mmdp: num_states must be positive");
  if (action_counts_.empty() || static_cast<int>(action_counts_.size()) > kMaxAgents) {
    throw std::invalid_argument("Mmdp: agent count must be in [1, 12]");
  }
  strides_.assign(action_counts_.size(), 1);
  num_joint_ = 1;
  for (int i = static_cast<int>(action_counts_.size()) - 1; i >= 0; --i) {
    if (action_counts_[i] <= 0) throw std::invalid_argument("Mmdp: empty action set");
    strides_[i] = num_joint_;
    num_joint_ *= action_counts_[i];
  }
  const auto cells = static_cast<std::size_t>(num_states_) * num_joint_;
  rewards_.assign(cells, 0.0);
  transitions_.assign(cells, {});
  initial_.assign(num_states_, 0.0);
  terminal_.assign(num_states_, 0);
}

std::vector<int> Mmdp::terminal_states() const {
  std::vector<int> out;
  for (int s = 0; s < num_states_; ++s) {
    if (terminal_[s]) out.push_back(s);
  }
  return out;
}

void Mmdp::set_reward(int s, int joint, double r) { rewards_.at(index(s, joint)) = r; }

void Mmdp::set_transition(int s, int joint, std::vector<Successor> row) {
  transitions_.at(index(s, joint)) = std::move(row);
}

void Mmdp::add_transition(int s, int joint, int next, double prob) {
  auto& row = transitions_.at(index(s, joint));
  for (auto& succ : row) {
    if (succ.state == next) {
      succ.prob += prob;
      return;
    }
  }
  row.push_back({next, prob});
}

void Mmdp::set_initial_dist(std::vector<double> dist) {
  if (static_cast<int>(dist.size()) != num_states_) {
    throw std::invalid_argument("Mmdp: initial distribution has wrong length");
  }
  initial_ = std::move(dist);
}

void Mmdp::set_terminal(int s) {
  terminal_.at(s) = 1;
  for (int a = 0; a < num_joint_; ++a) {
    rewards_[index(s, a)] = 0.0;
    transitions_[index(s, a)] = {{s, 1.0}};
  }
}

int Mmdp::encode(std::span<const int> actions) const {
  if (actions.size() != action_counts_.size()) {
    throw std::invalid_argument("Mmdp::encode: wrong number of actions");
  }
  int joint = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < 0 || actions[i] >= action_counts_[i]) {
      throw std::out_of_range("Mmdp::encode: action out of range");
    }
    joint += actions[i] * strides_[i];
  }
  return joint;
}

std::vector<int> Mmdp::decode(int joint) const {
  std::vector<int> out(action_counts_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (joint / strides_[i]) % action_counts_[i];
  return out;
}

int Mmdp::agent_action(int joint, int agent) const {
  return (joint / strides_[agent]) % action_counts_[agent];
}

AgentPolicy AgentPolicy::deterministic(int num_states, int num_actions, int action) {
  AgentPolicy p;
  p.probs.assign(num_states, std::vector<double>(num_actions, 0.0));
  for (auto& row : p.probs) row.at(action) = 1.0;
  return p;
}

AgentPolicy AgentPolicy::uniform(int num_states, int num_actions) {
  AgentPolicy p;
  p.probs.assign(num_states, std::vector<double>(num_actions, 1.0 / num_actions));
  return p;
}

JointDistribution to_joint_distribution(const Mmdp& m, const JointPolicy& pi) {
  if (static_cast<int>(pi.agents.size()) != m.num_agents()) {
    throw std::invalid_argument("joint policy agent count does not match model");
  }
  JointDistribution out;
  out.num_joint = m.num_joint_actions();
  out.probs.assign(static_cast<std::size_t>(m.num_states()) * out.num_joint, 0.0);
  std::vector<int> actions(m.num_agents());
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < out.num_joint; ++a) {
      double p = 1.0;
      for (int i = 0; i < m.num_agents() && p != 0.0; ++i) {
        p *= pi.agents[i].probs[s][m.agent_action(a, i)];
      }
      out.probs[static_cast<std::size_t>(s) * out.num_joint + a] = p;
    }
  }
  return out;
}

std::vector<std::string> validate_mmdp(const Mmdp& m) {
  std::vector<std::string> report;
  if (!(m.discount() >= 0.0 && m.discount() < 1.0)) {
    report.push_back("discount must lie in [0, 1)");
  }
  double sigma_sum = 0.0;
  bool sigma_negative = false;
  for (double p : m.initial_dist()) {
    sigma_sum += p;
    if (p < 0.0 || !std::isfinite(p)) sigma_negative = true;
  }
  if (sigma_negative) report.push_back("initial distribution has a negative or non-finite entry");
  if (std::abs(sigma_sum - 1.0) > kRowTol) {
    std::ostringstream os;
    os << "initial distribution sums to " << sigma_sum;
    report.push_back(os.str());
  }
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      auto row = m.successors(s, a);
      if (!std::isfinite(m.reward(s, a))) {
        report.push_back("reward (" + std::to_string(s) + ", " + std::to_string(a) + ") is not finite");
      }
      if (row.empty()) {
        report.push_back("transition row (" + std::to_string(s) + ", " + std::to_string(a) +
                         ") is missing");
        continue;
      }
      double total = 0.0;
      bool bad_entry = false;
      for (const auto& succ : row) {
        total += succ.prob;
        if (succ.prob < 0.0 || succ.state < 0 || succ.state >= m.num_states()) bad_entry = true;
      }
      if (bad_entry || std::abs(total - 1.0) > kRowTol) {
        std::ostringstream os;
        os << "transition row (" << s << ", " << a << ") sums to " << total
           << (bad_entry ? " with an invalid entry" : "");
        report.push_back(os.str());
      }
      if (m.is_terminal(s)) {
        bool self_loop = row.size() == 1 && row[0].state == s && row[0].prob == 1.0;
        if (!self_loop || m.reward(s, a) != 0.0) {
          report.push_back("terminal state " + std::to_string(s) +
                           " must self-loop with zero reward");
        }
      }
    }
  }
  return report;
}

std::vector<std::string> validate_policy(const Mmdp& m, const JointPolicy& pi) {
  std::vector<std::string> report;
  if (static_cast<int>(pi.agents.size()) != m.num_agents()) {
    report.push_back("policy has " + std::to_string(pi.agents.size()) + " agents, model has " +
                     std::to_string(m.num_agents()));
    return report;
  }
  for (int i = 0; i < m.num_agents(); ++i) {
    const auto& probs = pi.agents[i].probs;
    if (static_cast<int>(probs.size()) != m.num_states()) {
      report.push_back("agent " + std::to_string(i + 1) + " policy has wrong state count");
      continue;
    }
    for (int s = 0; s < m.num_states(); ++s) {
      if (static_cast<int>(probs[s].size()) != m.action_count(i)) {
        report.push_back("agent " + std::to_string(i + 1) + " row " + std::to_string(s) +
                         " has wrong action count");
        continue;
      }
      double total = 0.0;
      bool negative = false;
      for (double p : probs[s]) {
        total += p;
        if (p < 0.0 || !std::isfinite(p)) negative = true;
      }
      if (negative || std::abs(total - 1.0) > kRowTol) {
        std::ostringstream os;
        os << "agent " << i + 1 << " row " << s << " is not a distribution (sum " << total << ")";
        report.push_back(os.str());
      }
    }
  }
  return report;
}

namespace {

void policy_rewards(const Mmdp& m, const JointDistribution& pi, std::vector<double>& r) {
  r.assign(m.num_states(), 0.0);
  for (int s = 0; s < m.num_states(); ++s) {
    auto row = pi.row(s);
    double acc = 0.0;
    for (int a = 0; a < pi.num_joint; ++a) {
      if (row[a] != 0.0) acc += row[a] * m.reward(s, a);
    }
    r[s] = acc;
  }
}

std::vector<double> evaluate_direct(const Mmdp& m, const JointDistribution& pi) {
  const int n = m.num_states();
  const double gamma = m.discount();
  std::vector<double> r;
  policy_rewards(m, pi, r);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) * 4);
  std::vector<double> dense_row(n, 0.0);
  std::vector<int> touched;
  for (int s = 0; s < n; ++s) {
    auto row = pi.row(s);
    for (int a = 0; a < pi.num_joint; ++a) {
      if (row[a] == 0.0) continue;
      for (const auto& succ : m.successors(s, a)) {
        if (dense_row[succ.state] == 0.0) touched.push_back(succ.state);
        dense_row[succ.state] += row[a] * succ.prob;
      }
    }
    bool diag_seen = false;
    for (int t : touched) {
      double coeff = -gamma * dense_row[t];
      if (t == s) {
        coeff += 1.0;
        diag_seen = true;
      }
      triplets.emplace_back(s, t, coeff);
      dense_row[t] = 0.0;
    }
    if (!diag_seen) triplets.emplace_back(s, s, 1.0);
    touched.clear();
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("policy evaluation: singular system");
  }
  Eigen::Map<const Eigen::VectorXd> rhs(r.data(), n);
  Eigen::VectorXd v = solver.solve(rhs);
  return {v.data(), v.data() + n};
}

}  // namespace

std::vector<double> evaluate_values_iterative(const Mmdp& m, const JointDistribution& pi,
                                              double tol) {
  const int n = m.num_states();
  const double gamma = m.discount();
  std::vector<double> r;
  policy_rewards(m, pi, r);
  long cap = 10;
  if (gamma > 0.0) cap = 10 * static_cast<long>(std::ceil(std::log(1e-12) / std::log(gamma)));
  cap = std::max(cap, 10L);
  std::vector<double> v(n, 0.0), next(n, 0.0);
  for (long it = 0; it < cap; ++it) {
    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
      auto row = pi.row(s);
      double acc = r[s];
      for (int a = 0; a < pi.num_joint; ++a) {
        if (row[a] == 0.0) continue;
        double backup = 0.0;
        for (const auto& succ : m.successors(s, a)) backup += succ.prob * v[succ.state];
        acc += gamma * row[a] * backup;
      }
      next[s] = acc;
      residual = std::max(residual, std::abs(acc - v[s]));
    }
    v.swap(next);
    if (residual <= tol) break;
  }
  return v;
}

std::vector<double> evaluate_values(const Mmdp& m, const JointDistribution& pi) {
  if (pi.num_joint != m.num_joint_actions() ||
      pi.probs.size() != static_cast<std::size_t>(m.num_states()) * m.num_joint_actions()) {
    throw std::invalid_argument("evaluate: behavior table shape does not match model");
  }
  if (m.num_states() <= kDirectSolveLimit) return evaluate_direct(m, pi);
  return evaluate_values_iterative(m, pi);
}

double evaluate_return(const Mmdp& m, const JointDistribution& pi) {
  auto v = evaluate_values(m, pi);
  double j = 0.0;
  for (int s = 0; s < m.num_states(); ++s) j += m.initial_dist()[s] * v[s];
  return j;
}

double evaluate_return(const Mmdp& m, const JointPolicy& pi) {
  return evaluate_return(m, to_joint_distribution(m, pi));
}

std::vector<std::vector<int>> joint_action_iter(const Mmdp& m, Coalition coalition) {
  if (coalition >> m.num_agents()) throw std::out_of_range("coalition refers to unknown agent");
  const auto mem = members(coalition);
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(mem.size(), 0);
  while (true) {
    out.push_back(tuple);
    int k = static_cast<int>(mem.size()) - 1;
    while (k >= 0) {
      if (++tuple[k] < m.action_count(mem[k])) break;
      tuple[k] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

std::vector<int> reverse_topological_order(const Mmdp& m) {
  const int n = m.num_states();
  std::vector<std::vector<int>> succ(n);
  for (int s = 0; s < n; ++s) {
    if (m.is_terminal(s)) continue;
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      for (const auto& t : m.successors(s, a)) {
        if (t.prob > 0.0) succ[s].push_back(t.state);
      }
    }
    std::sort(succ[s].begin(), succ[s].end());
    succ[s].erase(std::unique(succ[s].begin(), succ[s].end()), succ[s].end());
  }
  // Iterative DFS post-order; a back edge means a cycle.
  std::vector<int> order;
  std::vector<char> color(n, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (color[root]) continue;
    stack.emplace_back(root, 0);
    color[root] = 1;
    while (!stack.empty()) {
      auto& [s, next] = stack.back();
      if (next < succ[s].size()) {
        int t = succ[s][next++];
        if (color[t] == 1) return {};
        if (color[t] == 0) {
          color[t] = 1;
          stack.emplace_back(t, 0);
        }
      } else {
        color[s] = 2;
        order.push_back(s);
        stack.pop_back();
      }
    }
  }
  return order;
}

std::uint64_t content_hash(const Mmdp& m) {
  Fnv1a h;
  h.add(m.num_states());
  for (int c : m.action_counts()) h.add(c);
  h.add(m.discount());
  for (double p : m.initial_dist()) h.add(p);
  for (int s = 0; s < m.num_states(); ++s) {
    h.add(static_cast<int>(m.is_terminal(s)));
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      h.add(m.reward(s, a));
      for (const auto& succ : m.successors(s, a)) {
        h.add(succ.state);
        h.add(succ.prob);
      }
    }
  }
  return h.value();
}

std::uint64_t content_hash(const JointDistribution& pi) {
  Fnv1a h;
  h.add(pi.num_joint);
  h.add_bytes(pi.probs.data(), pi.probs.size() * sizeof(double));
  return h.value();
}

}  // namespace blame
