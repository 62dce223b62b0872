#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blame/coalition.hpp"
#include "blame/mmdp.hpp"

namespace blame {

/// Marginal inefficiency of every coalition, indexed by bitmask.
struct CharacteristicGame {
  int num_agents = 0;
  std::vector<double> values;

  double operator[](Coalition s) const { return values[s]; }
  /// Inefficiency of the grand coalition.
  double total() const { return values.back(); }
};

CharacteristicGame zero_game(int num_agents);

/// Violations of the game invariants (empty set is 0, monotone within 1e-9).
std::vector<std::string> validate_game(const CharacteristicGame& game);

struct BestResponse {
  Coalition coalition = 0;
  /// Chosen coalition action per state, as an index into joint_action_iter.
  std::vector<int> actions;
  double value = 0.0;
  /// Behavior with the coalition's part replaced by `actions`.
  JointDistribution behavior;
};

/// Best response of `coalition` when the complement follows its marginal
/// under `behavior`. Ties go to the lowest coalition action index.
BestResponse best_response(const Mmdp& m, const JointDistribution& behavior, Coalition coalition);
BestResponse best_response(const Mmdp& m, const JointPolicy& behavior, Coalition coalition);

BestResponse optimal_joint(const Mmdp& m);

/// `behavior` with each coalition member switched to its deterministic
/// best-response action.
JointPolicy with_best_response(const Mmdp& m, const JointPolicy& behavior, const BestResponse& br);

/// Thread-safe memo of games keyed by (model, behavior) content hash.
class GameCache {
 public:
  bool lookup(std::uint64_t key, CharacteristicGame& out) const;
  void insert(std::uint64_t key, const CharacteristicGame& game);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::uint64_t, CharacteristicGame> games_;
};

CharacteristicGame characteristic_game(const Mmdp& m, const JointDistribution& behavior,
                                       GameCache* cache = nullptr);
CharacteristicGame characteristic_game(const Mmdp& m, const JointPolicy& behavior,
                                       GameCache* cache = nullptr);

/// One-step model with binary actions whose game is exactly `f`.
std::pair<Mmdp, JointPolicy> mmdp_from_game(const CharacteristicGame& f);

namespace detail {

/// Coalition and complement action indices of every joint action.
struct CoalitionSplit {
  int coalition_actions = 1;
  int complement_actions = 1;
  std::vector<int> coalition_index;
  std::vector<int> complement_index;
};

CoalitionSplit split_joint_actions(const Mmdp& m, Coalition coalition);

}  // namespace detail

}  // namespace blame
