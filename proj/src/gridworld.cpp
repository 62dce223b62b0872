#include <fstream>
#include <stdexcept>

#include "blame/envs.hpp"
#include "blame/planning.hpp"

namespace blame {

namespace {

constexpr int kCells = kGridSide * kGridSide;
constexpr int kMoves = 4;

void check_map(const GridMap& map) {
  if (map.size() != kGridSide) throw std::invalid_argument("grid map needs 8 rows");
  bool has_start = false;
  bool has_goal = false;
  for (const auto& row : map) {
    if (row.size() != kGridSide) throw std::invalid_argument("grid map rows need 8 cells");
    for (char c : row) {
      if (c == 'S') has_start = true;
      else if (c == 'G') has_goal = true;
      else if (c != '.' && c != 'F' && c != 'H') {
        throw std::invalid_argument(std::string("grid map: unknown cell '") + c + "'");
      }
    }
  }
  if (!has_start || !has_goal) throw std::invalid_argument("grid map needs S and G cells");
}

char cell_at(const GridMap& map, int cell) { return map[cell / kGridSide][cell % kGridSide]; }

int step(int cell, int move) {
  int r = cell / kGridSide;
  int c = cell % kGridSide;
  switch (move) {
    case kLeft: c = c > 0 ? c - 1 : c; break;
    case kRight: c = c < kGridSide - 1 ? c + 1 : c; break;
    case kUp: r = r > 0 ? r - 1 : r; break;
    case kDown: r = r < kGridSide - 1 ? r + 1 : r; break;
  }
  return r * kGridSide + c;
}

double entry_reward(const GridworldSpec& spec, char cell, bool cost_blind) {
  switch (cell) {
    case 'G': return spec.goal_reward;
    case 'F': return cost_blind ? spec.blank_reward : spec.fringe_reward;
    case 'H': return cost_blind ? spec.blank_reward : spec.hole_reward;
    default: return spec.blank_reward;
  }
}

std::vector<double> start_dist(const GridMap& map) {
  std::vector<double> sigma(kCells, 0.0);
  int starts = 0;
  for (int s = 0; s < kCells; ++s) starts += cell_at(map, s) == 'S';
  for (int s = 0; s < kCells; ++s) {
    if (cell_at(map, s) == 'S') sigma[s] = 1.0 / starts;
  }
  return sigma;
}

std::vector<int> single_agent_plan(const GridworldSpec& spec, bool cost_blind) {
  Mmdp solo(kCells, {kMoves}, spec.discount);
  for (int s = 0; s < kCells; ++s) {
    for (int a = 0; a < kMoves; ++a) {
      int next = step(s, a);
      solo.set_reward(s, a, entry_reward(spec, cell_at(spec.map, next), cost_blind));
      solo.set_transition(s, a, {{next, 1.0}});
    }
  }
  solo.set_initial_dist(start_dist(spec.map));
  for (int s = 0; s < kCells; ++s) {
    if (cell_at(spec.map, s) == 'G') solo.set_terminal(s);
  }
  return optimal_joint(solo).actions;
}

}  // namespace

GridMap default_grid_map() {
  return {
      ".F..F.F.",
      "FHF.HHHF",
      "FH..F.F.",
      "SHFF...G",
      "..HH....",
      ".F..HF..",
      "FHF.FHF.",
      ".....F..",
  };
}

std::string default_grid_map_path() { return std::string(BLAME_DATA_DIR) + "/gridworld.map"; }

GridMap load_grid_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid map " + path);
  GridMap map;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    map.push_back(line);
  }
  try {
    check_map(map);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return map;
}

AgentPolicy Gridworld::actor_policy(double weight) const {
  const int n = model.num_states();
  AgentPolicy pi;
  pi.probs.assign(n, std::vector<double>(kMoves, 0.0));
  // Personal policy: fixed mix of the optimal and cost-blind moves.
  for (int s = 0; s < n; ++s) {
    auto& row = pi.probs[s];
    row[optimal_move[s]] += weight + (1.0 - weight) * personal_mix;
    row[blind_move[s]] += (1.0 - weight) * (1.0 - personal_mix);
  }
  return pi;
}

Gridworld build_gridworld(const GridworldSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0) ||
      !(spec.alpha_prime >= 0.0 && spec.alpha_prime <= 1.0)) {
    throw std::invalid_argument("gridworld: alpha and alpha_prime must lie in [0, 1]");
  }
  if (!(spec.personal_mix >= 0.0 && spec.personal_mix <= 1.0)) {
    throw std::invalid_argument("gridworld: personal_mix must lie in [0, 1]");
  }
  check_map(spec.map);

  Gridworld out;
  out.optimal_move = single_agent_plan(spec, false);
  out.blind_move = single_agent_plan(spec, true);
  out.personal_mix = spec.personal_mix;

  Mmdp& m = out.model;
  m = Mmdp(kCells, {kMoves, 2}, spec.discount);
  for (int s = 0; s < kCells; ++s) {
    for (int a1 = 0; a1 < kMoves; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        const int joint = m.encode(std::vector<int>{a1, a2});
        const int move = a2 == 1 ? out.optimal_move[s] : a1;
        const int next = step(s, move);
        double r = entry_reward(spec, cell_at(spec.map, next), false);
        if (a2 == 1) r += spec.intervention_cost;
        m.set_reward(s, joint, r);
        m.set_transition(s, joint, {{next, 1.0}});
      }
    }
  }
  m.set_initial_dist(start_dist(spec.map));
  for (int s = 0; s < kCells; ++s) {
    if (cell_at(spec.map, s) == 'G') m.set_terminal(s);
  }

  // A_2 best-responds to its own model of A_1.
  JointPolicy believed{{out.actor_policy(spec.alpha_prime), AgentPolicy::uniform(kCells, 2)}};
  JointPolicy trained = with_best_response(m, believed, best_response(m, believed, singleton(1)));
  out.behavior = JointPolicy{{out.actor_policy(spec.alpha), trained.agents[1]}};
  return out;
}

}  // namespace blame
