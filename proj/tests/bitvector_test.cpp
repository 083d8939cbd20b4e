#include <gtest/gtest.h>

#include <stdexcept>

#include "checks.hpp"
#include "sgdq/bitvector.hpp"

using namespace sgdq;

TEST(BitVector, StringRoundTrip) {
  BitVector v = BitVector::from_string("000110011");
  EXPECT_EQ(v.size(), 9u);
  EXPECT_FALSE(v.first_bit());
  EXPECT_EQ(v.runs(), (std::vector<std::uint32_t>{3, 2, 2, 2}));
  EXPECT_EQ(v.to_string(), "000110011");
  EXPECT_EQ(v.count(), 4u);
  EXPECT_EQ(v.ones(), (std::vector<std::uint32_t>{3, 4, 7, 8}));
}

TEST(BitVector, FixtureAnd) {
  BitVector reply = BitVector::from_string("000110011");
  BitVector content = BitVector::from_string("001110111");
  EXPECT_EQ(bv_and(reply, content).to_string(), "000110011");
  EXPECT_EQ(bv_or(reply, content).to_string(), "001110111");
  EXPECT_EQ(bv_and_not(content, reply).to_string(), "001000100");
}

TEST(BitVector, Edges) {
  EXPECT_TRUE(BitVector::zeros(0).none());
  EXPECT_EQ(BitVector::zeros(0).to_string(), "");
  EXPECT_TRUE(BitVector::zeros(70).none());
  EXPECT_EQ(BitVector::ones(70).count(), 70u);
  EXPECT_FALSE(BitVector::ones(1).none());
  EXPECT_EQ(BitVector::ones(5), BitVector::from_string("11111"));
  EXPECT_EQ(BitVector::from_runs(5, true, {2, 0, 3}), BitVector::ones(5));
}

TEST(BitVector, Errors) {
  BitVector v = BitVector::from_string("0101");
  EXPECT_THROW(v.rank_range(2, 1), std::out_of_range);
  EXPECT_THROW(v.rank_range(0, 4), std::out_of_range);
  EXPECT_THROW(bv_and(v, BitVector::zeros(5)), std::invalid_argument);
  EXPECT_THROW(bv_or(v, BitVector::zeros(3)), std::invalid_argument);
  EXPECT_THROW(BitVector::from_string("01x"), std::invalid_argument);
  EXPECT_THROW(BitVector::from_runs(4, false, {1, 1}), std::invalid_argument);
}

TEST(BitVector, RankRange) {
  BitVector v = BitVector::from_string("1101100111");
  EXPECT_EQ(v.rank_range(0, 9), 7u);
  EXPECT_EQ(v.rank_range(2, 2), 0u);
  EXPECT_EQ(v.rank_range(3, 6), 2u);
  EXPECT_EQ(v.rank_range(7, 9), 3u);
}

TEST(DenseBits, Basics) {
  DenseBits d(130);
  d.set(0);
  d.set(64);
  d.set(129);
  EXPECT_EQ(d.count(), 3u);
  EXPECT_TRUE(d.test(64));
  EXPECT_FALSE(d.test(130));
  EXPECT_EQ(d.count_range(1, 200), 2u);
  d.reset(64);
  EXPECT_EQ(d.compress().ones(), (std::vector<std::uint32_t>{0, 129}));
  DenseBits e(130);
  e.set(129);
  EXPECT_TRUE(d.intersects(e));
  d &= e;
  EXPECT_EQ(d.count(), 1u);
}

TEST(BitVector, RandomAgainstPlainModel) {
  auto sum = sgdq::testing::check_bitvector_ops(11, 3000);
  EXPECT_TRUE(sum.ok()) << sum.describe();
  EXPECT_GE(sum.checks, 3000u);
}
