#include "blame/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "blame/lp.hpp"
#include "blame/parallel.hpp"

namespace blame {

namespace {

constexpr double kPivotalTol = 1e-9;
constexpr long kPolicyIterations = 200;
constexpr long kSampleAttempts = 10'000'000;

enum class Sense { minimize, maximize };
enum class Path { fixed, ball, corners, box };

double half_l1(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
  return 0.5 * acc;
}

void check_set(const Mmdp& m, const UncertaintySet& set) {
  auto report = validate_policy(m, set.center);
  if (!report.empty()) throw std::invalid_argument("uncertainty set center: " + report.front());
  if (static_cast<int>(set.radii.size()) != m.num_agents()) {
    throw std::invalid_argument("uncertainty set needs one radius per agent");
  }
  for (double r : set.radii) {
    if (!(r >= 0.0)) throw std::invalid_argument("uncertainty radius must be nonnegative");
  }
}

/// One robust Bellman recursion for a fixed coalition and sense.
class Recursion {
 public:
  Recursion(const Mmdp& m, const UncertaintySet& set, Coalition coalition, Sense sense,
            const RobustOptions& opts)
      : m_(m), set_(set), coalition_(coalition), sense_(sense), opts_(opts),
        split_(detail::split_joint_actions(m, coalition)) {
    check_set(m, set);
    for (int j = 0; j < m.num_agents(); ++j) {
      if (contains(coalition, j)) continue;
      complement_.push_back(j);
      if (set.radii[j] > 0.0) uncertain_.push_back(j);
    }
    bool all_binary = std::all_of(uncertain_.begin(), uncertain_.end(),
                                  [&](int j) { return m.action_count(j) == 2; });
    if (uncertain_.empty()) {
      path_ = Path::fixed;
    } else if (opts.mode == RobustMode::relaxed) {
      path_ = Path::box;
    } else if (uncertain_.size() == 1) {
      path_ = Path::ball;
    } else if (sense == Sense::maximize && all_binary) {
      path_ = Path::corners;
    } else {
      path_ = Path::box;
    }
    if (path_ == Path::box) box_ = relaxed_box(m, set);
    q_.assign(static_cast<std::size_t>(split_.coalition_actions) * split_.complement_actions, 0.0);
    for (int a = 0; a < m.num_joint_actions(); ++a) {
      if (split_.coalition_index[a] == 0) representatives_.push_back(a);
    }
  }

  bool factorized() const { return path_ != Path::box; }

  RobustResult run() {
    const int n_states = m_.num_states();
    const int n_joint = m_.num_joint_actions();
    RobustResult out;
    out.chosen = to_joint_distribution(m_, set_.center);
    std::vector<std::vector<std::vector<double>>> factored(n_states);
    std::vector<double> v(n_states, 0.0);
    std::vector<double> row(n_joint);
    std::vector<std::vector<double>> rows;

    auto record = [&](int s) {
      std::copy(row.begin(), row.end(), out.chosen.probs.begin() + static_cast<std::ptrdiff_t>(s) * n_joint);
      if (factorized()) factored[s] = rows;
    };

    const auto order = reverse_topological_order(m_);
    if (!order.empty()) {
      for (int s : order) {
        if (m_.is_terminal(s)) continue;
        v[s] = backup(s, v, row, rows);
        record(s);
      }
    } else {
      v = evaluate_values(m_, best_response(m_, out.chosen, coalition_).behavior);
      bool converged = false;
      for (long it = 0; it < opts_.max_iterations && !converged; ++it) {
        double residual = 0.0;
        std::vector<double> next = v;
        for (int s = 0; s < n_states; ++s) {
          if (m_.is_terminal(s)) continue;
          next[s] = backup(s, v, row, rows);
          residual = std::max(residual, std::abs(next[s] - v[s]));
          record(s);
        }
        if (residual <= opts_.tolerance) {
          converged = true;
        } else if (it < kPolicyIterations) {
          // Fix the set player's choice and let the coalition respond fully.
          v = evaluate_values(m_, best_response(m_, out.chosen, coalition_).behavior);
        } else {
          v.swap(next);
        }
      }
    }
    out.state_values = v;
    out.value = 0.0;
    for (int s = 0; s < n_states; ++s) out.value += m_.initial_dist()[s] * v[s];
    if (factorized()) {
      JointPolicy pi = set_.center;
      for (int s = 0; s < n_states; ++s) {
        if (factored[s].empty()) continue;
        for (int i = 0; i < m_.num_agents(); ++i) pi.agents[i].probs[s] = factored[s][i];
      }
      out.chosen_factored = std::move(pi);
    }
    return out;
  }

 private:
  const std::vector<double>& center_row(int agent, int s) const {
    return set_.center.agents[agent].probs[s];
  }

  void fill_q(int s, const std::vector<double>& v) {
    const double gamma = m_.discount();
    const int n_comp = split_.complement_actions;
    for (int a = 0; a < m_.num_joint_actions(); ++a) {
      double next = 0.0;
      for (const auto& succ : m_.successors(s, a)) next += succ.prob * v[succ.state];
      q_[static_cast<std::size_t>(split_.coalition_index[a]) * n_comp + split_.complement_index[a]] =
          m_.reward(s, a) + gamma * next;
    }
  }

  double q(int c, int d) const {
    return q_[static_cast<std::size_t>(c) * split_.complement_actions + d];
  }

  /// Coalition's best value against a complement marginal.
  double best_against(const std::vector<double>& marg) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < split_.coalition_actions; ++c) {
      double acc = 0.0;
      for (int d = 0; d < split_.complement_actions; ++d) acc += marg[d] * q(c, d);
      best = std::max(best, acc);
    }
    return best;
  }

  std::vector<double> marginal_of(const std::vector<std::vector<double>>& rows) const {
    std::vector<double> marg(split_.complement_actions, 0.0);
    for (int a : representatives_) {
      double p = 1.0;
      for (int j : complement_) p *= rows[j][m_.agent_action(a, j)];
      marg[split_.complement_index[a]] = p;
    }
    return marg;
  }

  void product_row(const std::vector<std::vector<double>>& rows, std::vector<double>& row) const {
    for (int a = 0; a < m_.num_joint_actions(); ++a) {
      double p = 1.0;
      for (int i = 0; i < m_.num_agents(); ++i) p *= rows[i][m_.agent_action(a, i)];
      row[a] = p;
    }
  }

  double backup(int s, const std::vector<double>& v, std::vector<double>& row,
                std::vector<std::vector<double>>& rows) {
    fill_q(s, v);
    rows.clear();
    for (int i = 0; i < m_.num_agents(); ++i) rows.push_back(center_row(i, s));
    switch (path_) {
      case Path::fixed: {
        product_row(rows, row);
        return best_against(marginal_of(rows));
      }
      case Path::ball: return ball(s, row, rows);
      case Path::corners: return corners(s, row, rows);
      case Path::box: return box(s, row);
    }
    throw std::logic_error("robust recursion: unknown path");
  }

  double ball(int s, std::vector<double>& row, std::vector<std::vector<double>>& rows) {
    const int u = uncertain_.front();
    const int k_u = m_.action_count(u);
    const int n_coal = split_.coalition_actions;
    const double radius = set_.radii[u];
    const std::vector<double>& center = center_row(u, s);
    // k[c][a_u]: coalition action c's value for each action of the uncertain agent.
    std::vector<double> k(static_cast<std::size_t>(n_coal) * k_u, 0.0);
    for (int a : representatives_) {
      double rest = 1.0;
      for (int j : complement_) {
        if (j != u) rest *= rows[j][m_.agent_action(a, j)];
      }
      if (rest == 0.0) continue;
      int au = m_.agent_action(a, u);
      int d = split_.complement_index[a];
      for (int c = 0; c < n_coal; ++c) k[static_cast<std::size_t>(c) * k_u + au] += rest * q(c, d);
    }
    auto value_of = [&](const std::vector<double>& dist) {
      double best = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_coal; ++c) {
        double acc = 0.0;
        for (int x = 0; x < k_u; ++x) acc += dist[x] * k[static_cast<std::size_t>(c) * k_u + x];
        best = std::max(best, acc);
      }
      return best;
    };

    std::vector<double> chosen;
    if (sense_ == Sense::maximize) {
      double best = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_coal; ++c) {
        const double* g = &k[static_cast<std::size_t>(c) * k_u];
        auto dist = shift_mass_to_best(center, g, radius);
        double val = 0.0;
        for (int x = 0; x < k_u; ++x) val += dist[x] * g[x];
        if (val > best) {
          best = val;
          chosen = std::move(dist);
        }
      }
    } else {
      chosen = ball_adversary(center, k, n_coal, k_u, radius);
    }
    rows[u] = chosen;
    product_row(rows, row);
    return value_of(chosen);
  }

  /// Maximizes dist . g over the ball by moving up to `radius` mass from the
  /// worst actions onto the best one.
  static std::vector<double> shift_mass_to_best(const std::vector<double>& center, const double* g,
                                                double radius) {
    const int k = static_cast<int>(center.size());
    std::vector<double> dist = center;
    int top = 0;
    for (int x = 1; x < k; ++x) {
      if (g[x] > g[top]) top = x;
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g[a] < g[b]; });
    double budget = radius;
    for (int x : order) {
      if (budget <= 0.0) break;
      if (x == top || g[x] >= g[top]) continue;
      double take = std::min(dist[x], budget);
      dist[x] -= take;
      dist[top] += take;
      budget -= take;
    }
    return dist;
  }

  /// min over the ball of max_c dist . k[c], as an LP in (up, down, t).
  std::vector<double> ball_adversary(const std::vector<double>& center,
                                     const std::vector<double>& k, int n_coal, int k_u,
                                     double radius) const {
    const int n_vars = 2 * k_u + 1;
    const int t = 2 * k_u;
    double kmin = *std::min_element(k.begin(), k.end());
    LinearProgram lp;
    lp.objective.assign(n_vars, 0.0);
    lp.objective[t] = -1.0;
    LpConstraint balance{std::vector<double>(n_vars, 0.0), 0.0};
    LpConstraint budget{std::vector<double>(n_vars, 0.0), 2.0 * radius};
    for (int x = 0; x < k_u; ++x) {
      balance.coeffs[x] = 1.0;
      balance.coeffs[k_u + x] = -1.0;
      budget.coeffs[x] = 1.0;
      budget.coeffs[k_u + x] = 1.0;
    }
    lp.constraints.push_back(balance);
    for (double& c : balance.coeffs) c = -c;
    lp.constraints.push_back(balance);
    lp.constraints.push_back(budget);
    for (int x = 0; x < k_u; ++x) {
      LpConstraint nonneg{std::vector<double>(n_vars, 0.0), center[x]};
      nonneg.coeffs[x] = -1.0;
      nonneg.coeffs[k_u + x] = 1.0;
      lp.constraints.push_back(std::move(nonneg));
    }
    for (int c = 0; c < n_coal; ++c) {
      const double* g = &k[static_cast<std::size_t>(c) * k_u];
      LpConstraint dominated{std::vector<double>(n_vars, 0.0), kmin};
      for (int x = 0; x < k_u; ++x) {
        dominated.coeffs[x] = g[x];
        dominated.coeffs[k_u + x] = -g[x];
        dominated.bound -= center[x] * g[x];
      }
      dominated.coeffs[t] = -1.0;
      lp.constraints.push_back(std::move(dominated));
    }
    auto sol = solve(lp);
    if (sol.status != LpStatus::optimal) {
      throw std::logic_error(std::string("robust recursion: adversary LP ") + to_string(sol.status));
    }
    std::vector<double> dist(k_u);
    for (int x = 0; x < k_u; ++x) dist[x] = center[x] + sol.point[x] - sol.point[k_u + x];
    return normalized(dist);
  }

  static std::vector<double> normalized(std::vector<double> dist) {
    double total = 0.0;
    for (double& p : dist) total += (p = std::max(p, 0.0));
    for (double& p : dist) p /= total;
    return dist;
  }

  double corners(int s, std::vector<double>& row, std::vector<std::vector<double>>& rows) {
    const int count = static_cast<int>(uncertain_.size());
    std::vector<double> lo(count), hi(count);
    for (int k = 0; k < count; ++k) {
      int j = uncertain_[k];
      double p1 = center_row(j, s)[1];
      lo[k] = std::max(p1 - set_.radii[j], 0.0);
      hi[k] = std::min(p1 + set_.radii[j], 1.0);
    }
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best_rows;
    for (unsigned mask = 0; mask < (1u << count); ++mask) {
      for (int k = 0; k < count; ++k) {
        double p1 = (mask >> k) & 1u ? hi[k] : lo[k];
        rows[uncertain_[k]] = {1.0 - p1, p1};
      }
      double val = best_against(marginal_of(rows));
      if (val > best) {
        best = val;
        best_rows = rows;
      }
    }
    rows = best_rows;
    product_row(rows, row);
    return best;
  }

  double box(int s, std::vector<double>& row) {
    const int n_joint = m_.num_joint_actions();
    const int n_coal = split_.coalition_actions;
    const double* lower = box_.lower.data() + static_cast<std::size_t>(s) * n_joint;
    const double* upper = box_.upper.data() + static_cast<std::size_t>(s) * n_joint;
    auto payoff = [&](int c, int a) { return q(c, split_.complement_index[a]); };
    auto value_of = [&](const std::vector<double>& x) {
      double best = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_coal; ++c) {
        double acc = 0.0;
        for (int a = 0; a < n_joint; ++a) acc += x[a] * payoff(c, a);
        best = std::max(best, acc);
      }
      return best;
    };
    const double slack = 1.0 - std::accumulate(lower, lower + n_joint, 0.0);

    if (sense_ == Sense::maximize) {
      double best = -std::numeric_limits<double>::infinity();
      std::vector<int> order(n_joint);
      std::vector<double> x(n_joint);
      for (int c = 0; c < n_coal; ++c) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return payoff(c, a) > payoff(c, b); });
        std::copy(lower, lower + n_joint, x.begin());
        double budget = slack;
        for (int a : order) {
          double add = std::min(upper[a] - lower[a], std::max(budget, 0.0));
          x[a] += add;
          budget -= add;
        }
        double val = 0.0;
        for (int a = 0; a < n_joint; ++a) val += x[a] * payoff(c, a);
        if (val > best) {
          best = val;
          row = x;
        }
      }
      return best;
    }

    // min_x max_c: variables y = x - lower and a shifted bound t.
    double qmin = *std::min_element(q_.begin(), q_.end());
    const int n_vars = n_joint + 1;
    const int t = n_joint;
    LinearProgram lp;
    lp.objective.assign(n_vars, 0.0);
    lp.objective[t] = -1.0;
    for (int a = 0; a < n_joint; ++a) {
      LpConstraint cap{std::vector<double>(n_vars, 0.0), upper[a] - lower[a]};
      cap.coeffs[a] = 1.0;
      lp.constraints.push_back(std::move(cap));
    }
    LpConstraint mass{std::vector<double>(n_vars, 0.0), slack};
    for (int a = 0; a < n_joint; ++a) mass.coeffs[a] = 1.0;
    lp.constraints.push_back(mass);
    for (double& c : mass.coeffs) c = -c;
    mass.bound = -slack;
    lp.constraints.push_back(mass);
    for (int c = 0; c < n_coal; ++c) {
      LpConstraint dominated{std::vector<double>(n_vars, 0.0), qmin};
      for (int a = 0; a < n_joint; ++a) {
        dominated.coeffs[a] = payoff(c, a);
        dominated.bound -= lower[a] * payoff(c, a);
      }
      dominated.coeffs[t] = -1.0;
      lp.constraints.push_back(std::move(dominated));
    }
    auto sol = solve(lp);
    if (sol.status != LpStatus::optimal) {
      throw std::logic_error(std::string("robust recursion: box LP ") + to_string(sol.status));
    }
    std::vector<double> x(n_joint);
    for (int a = 0; a < n_joint; ++a) x[a] = lower[a] + sol.point[a];
    x = normalized(std::move(x));
    row = x;
    return value_of(x);
  }

  const Mmdp& m_;
  const UncertaintySet& set_;
  Coalition coalition_;
  Sense sense_;
  RobustOptions opts_;
  detail::CoalitionSplit split_;
  std::vector<int> complement_;
  std::vector<int> uncertain_;
  std::vector<int> representatives_;
  Path path_ = Path::fixed;
  RelaxedBox box_;
  std::vector<double> q_;
};

std::vector<double> bracket_sums(const RobustBounds& b, const std::vector<double>& weight_by_size) {
  const int n = b.num_agents;
  const Coalition full = grand_coalition(n);
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Coalition rest = full & ~singleton(i);
    for (Coalition s = rest;; s = (s - 1) & rest) {
      out[i] += weight_by_size[coalition_size(s)] * (b.lower[s | singleton(i)] - b.upper[s]);
      if (s == 0) break;
    }
    out[i] = std::max(out[i], 0.0);
  }
  return out;
}

}  // namespace

double UncertaintySet::eps_max() const {
  return radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
}

bool UncertaintySet::contains(const JointPolicy& pi, double tol) const {
  if (pi.agents.size() != center.agents.size()) return false;
  for (std::size_t i = 0; i < pi.agents.size(); ++i) {
    const auto& rows = pi.agents[i].probs;
    if (rows.size() != center.agents[i].probs.size()) return false;
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (half_l1(rows[s], center.agents[i].probs[s]) > radii[i] + tol) return false;
    }
  }
  return true;
}

UncertaintySet make_uncertainty_set(JointPolicy center, double eps_max) {
  std::vector<double> radii(center.agents.size(), eps_max);
  return make_uncertainty_set(std::move(center), std::move(radii));
}

UncertaintySet make_uncertainty_set(JointPolicy center, std::vector<double> radii) {
  if (radii.size() != center.agents.size()) {
    throw std::invalid_argument("uncertainty set needs one radius per agent");
  }
  UncertaintySet set;
  set.center = std::move(center);
  set.radii = std::move(radii);
  return set;
}

std::vector<double> sample_ball_row(const std::vector<double>& row, double radius,
                                    std::mt19937_64& rng) {
  const int k = static_cast<int>(row.size());
  if (radius <= 0.0 || k <= 1) return row;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> q(k);
  for (long attempt = 0; attempt < kSampleAttempts; ++attempt) {
    double partial = 0.0;
    for (int a = 0; a + 1 < k; ++a) {
      double lo = std::max(row[a] - radius, 0.0);
      double hi = std::min(row[a] + radius, 1.0);
      q[a] = lo + (hi - lo) * unit(rng);
      partial += q[a];
    }
    q[k - 1] = 1.0 - partial;
    if (q[k - 1] < 0.0 || q[k - 1] > 1.0) continue;
    if (half_l1(q, row) <= radius) return q;
  }
  throw std::runtime_error("sample_ball_row: rejection sampling did not terminate");
}

UncertaintySet sample_center(const JointPolicy& truth, double eps_max, std::uint64_t seed) {
  return sample_center(truth, std::vector<double>(truth.agents.size(), eps_max), seed);
}

UncertaintySet sample_center(const JointPolicy& truth, std::vector<double> radii,
                             std::uint64_t seed) {
  if (radii.size() != truth.agents.size()) {
    throw std::invalid_argument("sample_center: one radius per agent required");
  }
  std::mt19937_64 rng(seed);
  JointPolicy center = truth;
  for (std::size_t i = 0; i < truth.agents.size(); ++i) {
    if (radii[i] < 0.0) throw std::invalid_argument("sample_center: negative radius");
    for (auto& row : center.agents[i].probs) row = sample_ball_row(row, radii[i], rng);
  }
  UncertaintySet set = make_uncertainty_set(std::move(center), std::move(radii));
  set.truth = truth;
  return set;
}

RelaxedBox relaxed_box(const Mmdp& m, const UncertaintySet& set) {
  check_set(m, set);
  RelaxedBox box;
  box.num_joint = m.num_joint_actions();
  const auto cells = static_cast<std::size_t>(m.num_states()) * box.num_joint;
  box.lower.assign(cells, 1.0);
  box.upper.assign(cells, 1.0);
  for (int s = 0; s < m.num_states(); ++s) {
    for (int a = 0; a < box.num_joint; ++a) {
      auto idx = static_cast<std::size_t>(s) * box.num_joint + a;
      for (int i = 0; i < m.num_agents(); ++i) {
        double p = set.center.agents[i].probs[s][m.agent_action(a, i)];
        box.lower[idx] *= std::max(p - set.radii[i], 0.0);
        box.upper[idx] *= std::min(p + set.radii[i], 1.0);
      }
    }
  }
  return box;
}

RobustResult robust_min(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts) {
  return Recursion(m, set, coalition, Sense::minimize, opts).run();
}

RobustResult robust_max(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts) {
  return Recursion(m, set, coalition, Sense::maximize, opts).run();
}

double robust_min_value(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts) {
  return robust_min(m, set, coalition, opts).value;
}

double robust_max_value(const Mmdp& m, const UncertaintySet& set, Coalition coalition,
                        const RobustOptions& opts) {
  return robust_max(m, set, coalition, opts).value;
}

RobustBounds compute_robust_bounds(const Mmdp& m, const UncertaintySet& set,
                                   const RobustOptions& opts) {
  check_set(m, set);
  RobustBounds b;
  b.num_agents = m.num_agents();
  const std::size_t count = std::size_t{1} << b.num_agents;
  b.lower.assign(count, 0.0);
  b.upper.assign(count, 0.0);
  parallel_for(2 * count, [&](std::size_t k) {
    Coalition s = static_cast<Coalition>(k / 2);
    if (k % 2 == 0) {
      b.lower[s] = robust_min_value(m, set, s, opts);
    } else if (s == 0) {
      b.max_empty = robust_max(m, set, 0, opts);
      b.upper[0] = b.max_empty.value;
    } else {
      b.upper[s] = robust_max_value(m, set, s, opts);
    }
  });
  return b;
}

BlameAssignment sv_valid(const Mmdp& m, const RobustBounds& bounds) {
  const RobustResult& best = bounds.max_empty;
  CharacteristicGame game = best.chosen_factored ? characteristic_game(m, *best.chosen_factored)
                                                 : characteristic_game(m, best.chosen);
  auto out = shapley(game);
  out.method = "SV_V";
  return out;
}

BlameAssignment sv_valid(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts) {
  RobustBounds b;
  b.num_agents = m.num_agents();
  b.max_empty = robust_max(m, set, 0, opts);
  return sv_valid(m, b);
}

BlameAssignment sv_blackstone(const RobustBounds& bounds) {
  return make_assignment("SV_BC", bracket_sums(bounds, shapley_weights(bounds.num_agents)));
}

BlameAssignment bi_blackstone(const RobustBounds& bounds) {
  std::vector<double> w(bounds.num_agents, banzhaf_weight(bounds.num_agents));
  return make_assignment("BI_BC", bracket_sums(bounds, w));
}

CharacteristicGame robust_lower_game(const RobustBounds& bounds) {
  CharacteristicGame g = zero_game(bounds.num_agents);
  for (Coalition s = 1; s < g.values.size(); ++s) {
    g.values[s] = std::max(0.0, bounds.lower[s] - bounds.upper[0]);
  }
  return g;
}

BlameAssignment mc_blackstone(const RobustBounds& bounds) {
  auto g = robust_lower_game(bounds);
  std::vector<double> b(bounds.num_agents);
  for (int i = 0; i < bounds.num_agents; ++i) b[i] = g[singleton(i)];
  return make_assignment("MC_BC", std::move(b));
}

BlameAssignment mer_blackstone(const RobustBounds& bounds, std::optional<int> tiebreak) {
  auto out = mer(robust_lower_game(bounds), tiebreak);
  out.method = "MER_BC";
  return out;
}

BlameAssignment ap_blackstone(const RobustBounds& bounds) {
  const int n = bounds.num_agents;
  const auto sv = sv_blackstone(bounds);
  const auto g = robust_lower_game(bounds);
  const double w = 1.0 / static_cast<double>((std::uint64_t{1} << n) - 1);
  const Coalition full = grand_coalition(n);
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!(sv.blames[i] > kPivotalTol)) continue;
    const Coalition rest = full & ~singleton(i);
    for (Coalition s = rest;; s = (s - 1) & rest) {
      b[i] += w * g[s | singleton(i)] / (coalition_size(s) + 1);
      if (s == 0) break;
    }
  }
  return make_assignment("AP_BC", std::move(b));
}

BlameAssignment sv_blackstone(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts) {
  return sv_blackstone(compute_robust_bounds(m, set, opts));
}
BlameAssignment bi_blackstone(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts) {
  return bi_blackstone(compute_robust_bounds(m, set, opts));
}
BlameAssignment mc_blackstone(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts) {
  return mc_blackstone(compute_robust_bounds(m, set, opts));
}
BlameAssignment mer_blackstone(const Mmdp& m, const UncertaintySet& set,
                               std::optional<int> tiebreak, const RobustOptions& opts) {
  return mer_blackstone(compute_robust_bounds(m, set, opts), tiebreak);
}
BlameAssignment ap_blackstone(const Mmdp& m, const UncertaintySet& set, const RobustOptions& opts) {
  return ap_blackstone(compute_robust_bounds(m, set, opts));
}

double l1_distance(const BlameAssignment& a, const BlameAssignment& b) {
  if (a.blames.size() != b.blames.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.blames.size(); ++i) acc += std::abs(a.blames[i] - b.blames[i]);
  return acc;
}

double total_difference(const BlameAssignment& a, const BlameAssignment& b) {
  return std::abs(a.total - b.total);
}

}  // namespace blame
