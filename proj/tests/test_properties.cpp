#include <gtest/gtest.h>

#include "properties.hpp"

using namespace electre::testing;

TEST(Properties, PartitionLaw) { EXPECT_EQ(check_partition_law(101), ""); }
TEST(Properties, IndexComplement) { EXPECT_EQ(check_index_complement(102), ""); }
TEST(Properties, ConcordanceThresholdNesting) { EXPECT_EQ(check_c_star_nesting(103), ""); }
TEST(Properties, DiscordanceThresholdNesting) { EXPECT_EQ(check_d_star_nesting(104), ""); }
TEST(Properties, PositiveAffineInvariance) { EXPECT_EQ(check_affine_invariance(105), ""); }
TEST(Properties, DominanceAlwaysOutranks) { EXPECT_EQ(check_dominance_edges(106), ""); }
TEST(Properties, KernelStableOnCondensation) { EXPECT_EQ(check_kernel_stability(107), ""); }
TEST(Properties, MatchesBruteForce) { EXPECT_EQ(check_brute_force_oracle(108), ""); }

// Normalized weights that do not sum to exactly 1 in floating point.
TEST(Properties, DominanceSurvivesRoundedWeights) {
  electre::DecisionMatrix m({{"a", ""}, {"b", ""}},
                            {{"x", "", electre::Direction::Maximize, 1, {}},
                             {"y", "", electre::Direction::Maximize, 4, {}},
                             {"z", "", electre::Direction::Maximize, 1, {}}},
                            std::vector<double>{2, 2, 2, 1, 1, 1});
  const std::vector<double> w{1.0 / 6, 4.0 / 6, 1.0 / 6};  // sums to 1 - 1 ulp
  EXPECT_TRUE(electre::is_normalized(w));
  EXPECT_TRUE(electre::outrank(m, w, {1.0, electre::kUnbounded}).has_edge(0, 1));
}
