#include <gtest/gtest.h>

#include "blame/properties.hpp"
#include "suites.hpp"

using namespace blame;

namespace {

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t k = 0; k < lines.size() && k < 10; ++k) out += lines[k] + "\n";
  return out;
}

}  // namespace

TEST(Properties, FixtureGamesAndShapley) {
  auto fx = impossibility_fixture();
  auto g = characteristic_game(fx.model, fx.behavior());
  auto g2 = characteristic_game(fx.model, fx.deviated());
  EXPECT_EQ(g.values.size(), 4u);
  for (Coalition s = 1; s < 4; ++s) EXPECT_NEAR(g[s], 2.0, 1e-9);
  EXPECT_NEAR(g2[1], 1.1, 1e-9);
  EXPECT_NEAR(g2[2], 0.0, 1e-9);
  EXPECT_NEAR(g2[3], 1.1, 1e-9);
  auto sv = shapley(g2);
  EXPECT_NEAR(sv.blames[0], 1.1, 1e-9);
  EXPECT_NEAR(sv.blames[1], 0.0, 1e-9);
}

TEST(Properties, ExpectedHoldCellsSurviveRandomGames) {
  auto failures = suites::verdict_matrix(60, 1);
  EXPECT_TRUE(failures.empty()) << joined(failures);
}

TEST(Properties, EveryMayFailCellHasAWitness) {
  auto witnesses = suites::may_fail_witnesses();
  for (Method m : kAllMethods) {
    for (Property p : may_fail(m)) {
      bool found = false;
      for (const auto& w : witnesses) {
        if (w.method == m && w.property == p) {
          found = true;
          EXPECT_FALSE(w.verdict.holds) << method_name(m) << " " << property_name(p);
          EXPECT_TRUE(w.verdict.witness.has_value());
        }
      }
      EXPECT_TRUE(found) << method_name(m) << " " << property_name(p);
    }
  }
}

TEST(Properties, ShapleyPerformanceWitnessHasExpectedNumbers) {
  auto fx = impossibility_fixture();
  auto dev = unilateral_deviation(fx.model, fx.behavior(), 0, fx.pi_1, fx.pi_1_prime);
  EXPECT_NEAR(dev.return_pi, 0.0, 1e-12);
  EXPECT_NEAR(dev.return_pi_prime, 0.9, 1e-12);
  auto v = check_performance_monotonicity(dev, 0, shapley(dev.game), shapley(dev.game_prime), 0.0);
  EXPECT_FALSE(v.holds);
  EXPECT_NE(v.witness->find("1.1"), std::string::npos);
}

TEST(Properties, PerturbedAssignmentsTransferAtEpsilon) {
  auto failures = suites::transfer_suite(60, 900);
  EXPECT_TRUE(failures.empty()) << joined(failures);
}

TEST(Properties, CorruptedAssignmentsAreCaught) {
  auto g = random_monotone_game(4, 3);
  auto sv = shapley(g);
  auto bumped = sv;
  bumped.blames[0] += 0.5;
  bumped.total += 0.5;
  EXPECT_FALSE(check_efficiency(g, bumped, 0.0).holds);
  EXPECT_FALSE(check_validity(g, bumped, 0.0).holds);
  EXPECT_TRUE(check_validity(g, bumped, 0.5).holds);
}

TEST(Properties, SymmetricGeneratorProducesInterchangeableAgents) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_symmetric_game(4, 1, 3, seed);
    EXPECT_TRUE(validate_game(g).empty());
    auto sv = shapley(g);
    EXPECT_NEAR(sv.blames[1], sv.blames[3], 1e-12);
  }
}

TEST(Properties, DominatingPairKeepsPivotality) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [big, small] = random_dominating_pair(4, seed);
    EXPECT_EQ(pivotality(big).flags, pivotality(small).flags);
    for (Coalition s = 0; s < big.values.size(); ++s) EXPECT_GE(big[s], small[s]);
  }
}

TEST(Properties, PerturbStaysWithinBallAndNonnegative) {
  auto g = random_monotone_game(5, 8);
  auto b = shapley(g);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = perturb(b, 0.05, seed);
    double l1 = 0.0;
    for (int i = 0; i < 5; ++i) {
      EXPECT_GE(p.blames[i], 0.0);
      l1 += std::abs(p.blames[i] - b.blames[i]);
    }
    EXPECT_LE(l1, 0.05 + 1e-12);
  }
}

TEST(Properties, VerdictCsvEscapesWitness) {
  PropertyVerdict v{Property::S, 0.01, false, std::string("a,b")};
  EXPECT_EQ(to_csv(v), "R_S,0.01,false,a;b");
}
