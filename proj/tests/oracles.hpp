#pragma once

// Slow reference implementations used only by tests. None of these call into
// the solvers they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "blame/coalition.hpp"
#include "blame/lp.hpp"
#include "blame/mmdp.hpp"
#include "blame/planning.hpp"

namespace oracle {

using blame::Coalition;

/// Average marginal contribution over all n! orderings.
inline std::vector<double> shapley_by_permutations(const blame::CharacteristicGame& g) {
  const int n = g.num_agents;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> acc(n, 0.0);
  long count = 0;
  do {
    Coalition s = 0;
    for (int i : order) {
      acc[i] += g[s | blame::singleton(i)] - g[s];
      s |= blame::singleton(i);
    }
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& a : acc) a /= static_cast<double>(count);
  return acc;
}

/// Banzhaf by explicit subset listing.
inline std::vector<double> banzhaf_by_subsets(const blame::CharacteristicGame& g) {
  const int n = g.num_agents;
  std::vector<double> acc(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (Coalition s = 0; s < (Coalition{1} << n); ++s) {
      if (s & blame::singleton(i)) continue;
      acc[i] += g[s | blame::singleton(i)] - g[s];
    }
    acc[i] /= std::pow(2.0, n - 1);
  }
  return acc;
}

/// Per-state values of a fixed joint-action table by plain fixed-point sweeps.
inline std::vector<double> values_by_sweeps(const blame::Mmdp& m, const std::vector<double>& table,
                                            int sweeps = 20000) {
  const int n = m.num_states();
  const int k = m.num_joint_actions();
  std::vector<double> v(n, 0.0), next(n);
  for (int it = 0; it < sweeps; ++it) {
    double diff = 0.0;
    for (int s = 0; s < n; ++s) {
      double acc = 0.0;
      for (int a = 0; a < k; ++a) {
        double p = table[static_cast<std::size_t>(s) * k + a];
        if (p == 0.0) continue;
        double q = m.reward(s, a);
        for (const auto& succ : m.successors(s, a)) q += m.discount() * succ.prob * v[succ.state];
        acc += p * q;
      }
      next[s] = acc;
      diff = std::max(diff, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (diff < 1e-14) break;
  }
  return v;
}

inline double return_by_sweeps(const blame::Mmdp& m, const std::vector<double>& table) {
  auto v = values_by_sweeps(m, table);
  double j = 0.0;
  for (int s = 0; s < m.num_states(); ++s) j += m.initial_dist()[s] * v[s];
  return j;
}

/// Joint table from per-agent rows.
inline std::vector<double> product_table(const blame::Mmdp& m, const blame::JointPolicy& pi) {
  std::vector<double> t(static_cast<std::size_t>(m.num_states()) * m.num_joint_actions());
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      double p = 1.0;
      for (int i = 0; i < m.num_agents(); ++i) p *= pi.agents[i].probs[s][m.agent_action(a, i)];
      t[static_cast<std::size_t>(s) * m.num_joint_actions() + a] = p;
    }
  }
  return t;
}

/// Best coalition return by enumerating every deterministic stationary
/// coalition policy. Feasible only for tiny models.
inline double best_response_by_enumeration(const blame::Mmdp& m, const blame::JointPolicy& pi,
                                           Coalition coalition) {
  const int n_states = m.num_states();
  std::vector<int> mem = blame::members(coalition);
  int coalition_actions = 1;
  for (int i : mem) coalition_actions *= m.action_count(i);
  std::vector<int> choice(n_states, 0);
  double best = -std::numeric_limits<double>::infinity();
  while (true) {
    blame::JointPolicy dev = pi;
    for (int s = 0; s < n_states; ++s) {
      int c = choice[s];
      for (int k = static_cast<int>(mem.size()) - 1; k >= 0; --k) {
        int count = m.action_count(mem[k]);
        auto& row = dev.agents[mem[k]].probs[s];
        std::fill(row.begin(), row.end(), 0.0);
        row[c % count] = 1.0;
        c /= count;
      }
    }
    best = std::max(best, return_by_sweeps(m, product_table(m, dev)));
    int s = 0;
    while (s < n_states && ++choice[s] == coalition_actions) choice[s++] = 0;
    if (s == n_states) break;
  }
  return best;
}

/// Marginal inefficiency game by enumeration.
inline blame::CharacteristicGame game_by_enumeration(const blame::Mmdp& m,
                                                     const blame::JointPolicy& pi) {
  blame::CharacteristicGame g = blame::zero_game(m.num_agents());
  const double base = return_by_sweeps(m, product_table(m, pi));
  for (Coalition s = 1; s < g.values.size(); ++s) {
    g.values[s] = best_response_by_enumeration(m, pi, s) - base;
  }
  return g;
}

/// max c.x over {A x <= b, x >= 0} by enumerating vertices. Returns NaN when
/// no vertex is feasible.
inline double lp_by_vertices(const blame::LinearProgram& lp, std::vector<double>* argmax = nullptr) {
  const int n = static_cast<int>(lp.objective.size());
  const int m = static_cast<int>(lp.constraints.size());
  // Rows 0..m-1 are the constraints, m..m+n-1 the sign constraints -x <= 0.
  const int rows = m + n;
  auto row = [&](int r, int j) {
    if (r < m) return lp.constraints[r].coeffs[j];
    return r - m == j ? -1.0 : 0.0;
  };
  auto rhs = [&](int r) { return r < m ? lp.constraints[r].bound : 0.0; };
  double best = std::numeric_limits<double>::quiet_NaN();
  std::vector<int> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) a(k, j) = row(pick[k], j);
      b(k) = rhs(pick[k]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(b);
      bool feasible = true;
      for (int r = 0; r < rows && feasible; ++r) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += row(r, j) * x(j);
        feasible = lhs <= rhs(r) + 1e-9;
      }
      if (feasible) {
        double val = 0.0;
        for (int j = 0; j < n; ++j) val += lp.objective[j] * x(j);
        if (std::isnan(best) || val > best) {
          best = val;
          if (argmax) argmax->assign(x.data(), x.data() + n);
        }
      }
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == rows - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace oracle
