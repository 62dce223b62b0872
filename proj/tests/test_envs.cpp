#include <gtest/gtest.h>

#include "blame/attribution.hpp"
#include "blame/envs.hpp"
#include "blame/planning.hpp"

using namespace blame;

namespace {

int joint_of(const Mmdp& m, std::vector<int> actions) { return m.encode(actions); }

}  // namespace

TEST(Gridworld, ShapeAndValidity) {
  auto gw = build_gridworld({});
  EXPECT_EQ(gw.model.num_states(), kGridSide * kGridSide);
  EXPECT_EQ(gw.model.action_counts(), (std::vector<int>{4, 2}));
  EXPECT_TRUE(validate_mmdp(gw.model).empty());
  EXPECT_TRUE(validate_policy(gw.model, gw.behavior).empty());
}

TEST(Gridworld, MapFileMatchesEmbeddedDefault) {
  EXPECT_EQ(load_grid_map(default_grid_map_path()), default_grid_map());
}

TEST(Gridworld, OptimalPlanReachesGoalFromStart) {
  auto gw = build_gridworld({});
  const auto map = default_grid_map();
  int s = -1;
  for (int k = 0; k < kGridSide * kGridSide; ++k) {
    if (gw.model.initial_dist()[k] > 0.0) s = k;
  }
  ASSERT_GE(s, 0);
  for (int step = 0; step < 64 && !gw.model.is_terminal(s); ++step) {
    const int joint = joint_of(gw.model, {gw.optimal_move[s], 0});
    s = gw.model.successors(s, joint)[0].state;
    EXPECT_NE(map[s / kGridSide][s % kGridSide], 'H');
  }
  EXPECT_TRUE(gw.model.is_terminal(s));
}

TEST(Gridworld, InterventionTakesOptimalMoveAtACost) {
  GridworldSpec spec;
  auto gw = build_gridworld(spec);
  for (int s = 0; s < gw.model.num_states(); ++s) {
    if (gw.model.is_terminal(s)) continue;
    const int own = joint_of(gw.model, {gw.optimal_move[s], 0});
    for (int a1 = 0; a1 < 4; ++a1) {
      const int forced = joint_of(gw.model, {a1, 1});
      EXPECT_EQ(gw.model.successors(s, forced)[0].state, gw.model.successors(s, own)[0].state);
      EXPECT_NEAR(gw.model.reward(s, forced), gw.model.reward(s, own) + spec.intervention_cost,
                  1e-12);
    }
  }
}

TEST(Gridworld, PerfectActorLeavesNothingToBlame) {
  GridworldSpec spec;
  spec.alpha = 1.0;
  spec.alpha_prime = 1.0;
  auto gw = build_gridworld(spec);
  EXPECT_NEAR(evaluate_return(gw.model, gw.behavior), optimal_joint(gw.model).value, 1e-9);
  auto g = characteristic_game(gw.model, gw.behavior);
  EXPECT_NEAR(shapley(g).total, 0.0, 1e-9);
}

TEST(Gridworld, ActorPolicyMixesPlans) {
  auto gw = build_gridworld({});
  auto pi = gw.actor_policy(0.4);
  for (int s = 0; s < gw.model.num_states(); ++s) {
    double sum = 0.0;
    for (double p : pi.probs[s]) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GE(pi.probs[s][gw.optimal_move[s]], 0.4 + 0.6 * gw.personal_mix - 1e-12);
  }
}

TEST(Gridworld, RejectsBadSpecs) {
  GridworldSpec spec;
  spec.alpha = 1.5;
  EXPECT_THROW(build_gridworld(spec), std::invalid_argument);
  spec = {};
  spec.map.pop_back();
  EXPECT_THROW(build_gridworld(spec), std::invalid_argument);
}

TEST(Graph, StateLayout) {
  for (int c = 1; c <= 4; ++c) {
    for (int l = 0; l < 16; ++l) EXPECT_EQ(graph_column(graph_state(c, l)), c);
  }
  for (auto variant : {GraphVariant::coordination, GraphVariant::robustness}) {
    GraphSpec spec;
    spec.variant = variant;
    auto [m, pi] = build_graph(spec);
    EXPECT_EQ(m.num_states(), kGraphStates);
    EXPECT_TRUE(m.is_terminal(kGraphTerminal));
    EXPECT_EQ(reachable_state_count(m), kGraphStates);
    EXPECT_TRUE(validate_mmdp(m).empty());
    EXPECT_TRUE(validate_policy(m, pi).empty());
  }
}

TEST(Graph, ThresholdsDecideRewards) {
  GraphSpec spec;
  spec.m = 1;
  auto [loose, ignore1] = build_graph(spec);
  EXPECT_EQ(loose.reward(kGraphStart, joint_of(loose, {0, 0, 0, 0})), -1.0);
  EXPECT_EQ(loose.reward(kGraphStart, joint_of(loose, {1, 0, 0, 0})), 1.0);
  spec.m = 4;
  auto [strict, ignore4] = build_graph(spec);
  EXPECT_EQ(strict.reward(kGraphStart, joint_of(strict, {1, 1, 1, 1})), 1.0);
  EXPECT_EQ(strict.reward(kGraphStart, joint_of(strict, {1, 1, 1, 0})), -1.0);
}

TEST(Graph, RobustnessRewardsBalancedLevels) {
  GraphSpec spec;
  spec.variant = GraphVariant::robustness;
  auto [m, pi] = build_graph(spec);
  EXPECT_EQ(m.reward(kGraphStart, joint_of(m, {1, 0, 1, 0})), 1.0);
  EXPECT_EQ(m.reward(kGraphStart, joint_of(m, {1, 1, 1, 0})), -1.0);
  EXPECT_LT(evaluate_return(m, pi), optimal_joint(m).value);
}

TEST(Graph, InactiveTeamIsInefficient) {
  auto [m, pi] = build_graph({});
  auto g = characteristic_game(m, pi);
  EXPECT_GT(g.total(), 0.0);
  EXPECT_TRUE(validate_game(g).empty());
}
