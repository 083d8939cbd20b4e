#include <gtest/gtest.h>

#include "checks.hpp"

using namespace sgdq;
using namespace sgdq::testing;

TEST(Property, EngineMatchesOracleSmall) {
  EquivalenceOptions o;
  o.partition_counts = {1, 3};
  o.sizes = {400, 1500};
  o.queries_per_store = 8;
  o.seed = 99;
  auto sum = check_oracle_equivalence(o);
  EXPECT_TRUE(sum.ok()) << sum.describe();
  EXPECT_GE(sum.checks, 40u);
}

TEST(Property, OrderRobustnessSmall) {
  auto sum = check_order_robustness(4, 12, 2);
  EXPECT_TRUE(sum.ok()) << sum.describe();
  EXPECT_EQ(sum.within_corrected_bound, sum.queries);
}
