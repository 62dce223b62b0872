#include <gtest/gtest.h>

#include "blame/attribution.hpp"
#include "blame/properties.hpp"
#include "oracles.hpp"

using namespace blame;

namespace {

CharacteristicGame game_of(int n, std::vector<double> values) {
  return CharacteristicGame{n, std::move(values)};
}

}  // namespace

TEST(Attribution, ShapleyWeightsSumToOneOverSubsets) {
  for (int n = 1; n <= 12; ++n) {
    auto w = shapley_weights(n);
    double total = 0.0;
    double binom = 1.0;
    for (int k = 0; k < n; ++k) {
      total += binom * w[k];
      binom = binom * (n - 1 - k) / (k + 1);
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << n;
  }
  EXPECT_DOUBLE_EQ(banzhaf_weight(4), 0.125);
}

TEST(Attribution, ShapleyMatchesPermutationAverage) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = random_monotone_game(2 + static_cast<int>(seed % 5), seed);
    auto expected = oracle::shapley_by_permutations(g);
    auto sv = shapley(g);
    for (int i = 0; i < g.num_agents; ++i) EXPECT_NEAR(sv.blames[i], expected[i], 1e-9);
    EXPECT_NEAR(sv.total, g.total(), 1e-9);
  }
}

TEST(Attribution, BanzhafMatchesSubsetListing) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = random_monotone_game(2 + static_cast<int>(seed % 5), seed + 1000);
    auto expected = oracle::banzhaf_by_subsets(g);
    auto bi = banzhaf(g);
    for (int i = 0; i < g.num_agents; ++i) EXPECT_NEAR(bi.blames[i], expected[i], 1e-12);
  }
}

TEST(Attribution, TwoAgentShapleyAndBanzhafCoincide) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_monotone_game(2, seed);
    auto sv = shapley(g), bi = banzhaf(g);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(sv.blames[i], bi.blames[i], 1e-12);
  }
}

TEST(Attribution, FixtureGameValues) {
  auto g = game_of(2, {0.0, 2.0, 2.0, 2.0});
  EXPECT_EQ(marginal_contribution(g).blames, (std::vector<double>{2.0, 2.0}));
  auto sv = shapley(g);
  EXPECT_NEAR(sv.blames[0], 1.0, 1e-12);
  EXPECT_NEAR(sv.blames[1], 1.0, 1e-12);
  auto ap = average_participation(g);
  // (1/3) * (2/1 + 2/2) per agent
  EXPECT_NEAR(ap.blames[0], 1.0, 1e-12);
  auto mer_out = mer(g);
  EXPECT_NEAR(mer_out.total, 2.0, 1e-9);
}

TEST(Attribution, MerIsRationalAndMaximal) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    auto g = random_monotone_game(n, seed + 77);
    auto b = mer(g);
    for (Coalition s = 1; s < g.values.size(); ++s) {
      double sum = 0.0;
      for (int i : members(s)) sum += b.blames[i];
      EXPECT_LE(sum, g[s] + 1e-9);
    }
    // Rational LP optimum by vertex enumeration on small instances.
    if (n <= 3) {
      LinearProgram lp;
      lp.objective.assign(n, 1.0);
      for (Coalition s = 1; s < g.values.size(); ++s) {
        LpConstraint c{std::vector<double>(n, 0.0), g[s]};
        for (int i : members(s)) c.coeffs[i] = 1.0;
        lp.constraints.push_back(c);
      }
      EXPECT_NEAR(b.total, oracle::lp_by_vertices(lp), 1e-9);
    }
  }
}

TEST(Attribution, MerTiebreakMovesBlameToChosenAgent) {
  auto g = game_of(2, {0.0, 2.0, 2.0, 2.0});
  auto first = mer(g, 0);
  auto second = mer(g, 1);
  EXPECT_NEAR(first.blames[0], 2.0, 1e-9);
  EXPECT_NEAR(second.blames[1], 2.0, 1e-9);
  EXPECT_NEAR(first.total, second.total, 1e-9);
}

TEST(Attribution, MerAcceptsNonMonotoneShape) {
  auto g = game_of(2, {0.0, 1.0, 0.5, 0.8});
  EXPECT_NO_THROW(mer(g));
  EXPECT_THROW(shapley(g), std::invalid_argument);
  EXPECT_THROW(banzhaf(g), std::invalid_argument);
  EXPECT_THROW(mer(game_of(2, {0.1, 1.0, 1.0, 1.0})), std::invalid_argument);
}

TEST(Attribution, AverageParticipationIdentity) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    auto g = random_monotone_game(n, seed + 500);
    double mean = 0.0;
    for (double v : g.values) mean += v;
    mean /= static_cast<double>(g.values.size() - 1);
    EXPECT_NEAR(average_participation(g).total, mean, 1e-9) << seed;
  }
}

TEST(Attribution, NullPlayersGetNothing) {
  // Agent 2 never changes any coalition's value.
  auto g = game_of(2, {0.0, 1.0, 0.0, 1.0});
  for (Method m : kAllMethods) {
    auto b = attribute(g, m, 0);
    EXPECT_NEAR(b.blames[1], 0.0, 1e-9) << method_name(m);
  }
  EXPECT_EQ(pivotality(g).flags, (std::vector<bool>{true, false}));
}

TEST(Attribution, MakeAssignmentClampsRoundoffOnly) {
  auto b = make_assignment("X", {-5e-10, 1.0});
  EXPECT_EQ(b.blames[0], 0.0);
  EXPECT_DOUBLE_EQ(b.total, 1.0);
  EXPECT_THROW(make_assignment("X", {-1e-6}), std::logic_error);
}

TEST(Attribution, MethodNamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("XX").has_value());
}

TEST(Attribution, ZeroGameGivesZeroBlame) {
  auto g = zero_game(4);
  for (Method m : kAllMethods) EXPECT_EQ(attribute(g, m).total, 0.0);
}
