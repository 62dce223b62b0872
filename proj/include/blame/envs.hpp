#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "blame/mmdp.hpp"

namespace blame {

// Gridworld: A_1 steers an actor over an 8x8 grid, A_2 may override it with
// the single-agent optimal move at a cost.

inline constexpr int kGridSide = 8;

/// Rows over {., S, F, H, G}.
using GridMap = std::vector<std::string>;

GridMap default_grid_map();
/// Reads an 8-line map; throws std::runtime_error on I/O or format errors.
GridMap load_grid_map(const std::string& path);
std::string default_grid_map_path();

struct GridworldSpec {
  double alpha = 0.4;
  double alpha_prime = 0.4;
  double intervention_cost = -0.05;
  double blank_reward = -0.01;
  double fringe_reward = -0.02;
  double hole_reward = -0.5;
  double goal_reward = 1.0;
  double discount = 0.99;
  /// Weight of the correct-cost optimal policy inside A_1's personal policy.
  double personal_mix = 0.5;
  GridMap map = default_grid_map();
};

enum GridAction { kLeft = 0, kRight = 1, kUp = 2, kDown = 3 };

struct Gridworld {
  Mmdp model;
  JointPolicy behavior;
  /// Single-agent optimal and cost-blind moves per cell.
  std::vector<int> optimal_move;
  std::vector<int> blind_move;
  double personal_mix = 0.5;
  /// A_1's behavior row with `weight` on the optimal move.
  AgentPolicy actor_policy(double weight) const;
};

Gridworld build_gridworld(const GridworldSpec& spec);

// Graph: four agents pick a level (0/1) at each of four columns.

enum class GraphVariant { coordination, robustness };

struct GraphSpec {
  GraphVariant variant = GraphVariant::coordination;
  int m = 1;
  std::array<int, 4> weights{1, 2, 3, 4};
  std::array<int, 4> thresholds{1, 7, 9, 10};
  std::array<double, 4> persistence{1.0, 0.8, 0.6, 0.4};
  double discount = 0.99;
};

inline constexpr int kGraphAgents = 4;
inline constexpr int kGraphStates = 66;
inline constexpr int kGraphStart = 0;
inline constexpr int kGraphTerminal = 65;

/// State for column 1..4 whose level bits equal the joint action that led there.
int graph_state(int column, int levels);
int graph_column(int state);

std::pair<Mmdp, JointPolicy> build_graph(const GraphSpec& spec);

/// States reachable from the initial distribution under any actions.
int reachable_state_count(const Mmdp& m);

}  // namespace blame
