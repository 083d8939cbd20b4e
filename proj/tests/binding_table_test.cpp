#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "sgdq/binding_table.hpp"

using namespace sgdq;

namespace {

BindingTable random_table(std::mt19937_64& rng, std::vector<std::uint32_t> schema,
                          std::size_t rows, VertexId range) {
  BindingTable t(std::move(schema));
  std::vector<VertexId> row(t.width());
  for (std::size_t r = 0; r < rows; ++r) {
    for (auto& v : row) v = 1 + rng() % range;
    t.add_row(row);
  }
  return t;
}

// Rows as vertex -> value maps, so column order does not matter.
std::multiset<std::vector<std::pair<std::uint32_t, VertexId>>> normalize(const BindingTable& t) {
  std::multiset<std::vector<std::pair<std::uint32_t, VertexId>>> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    std::vector<std::pair<std::uint32_t, VertexId>> row;
    for (std::size_t c = 0; c < t.width(); ++c) row.push_back({t.schema()[c], t.at(r, c)});
    std::sort(row.begin(), row.end());
    out.insert(row);
  }
  return out;
}

BindingTable nested_loop(const BindingTable& a, const BindingTable& b) {
  std::vector<std::uint32_t> schema = a.schema();
  std::vector<std::size_t> extra;
  for (std::size_t c = 0; c < b.width(); ++c) {
    if (!a.column_of(b.schema()[c])) {
      schema.push_back(b.schema()[c]);
      extra.push_back(c);
    }
  }
  BindingTable out(schema);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) {
      bool ok = true;
      for (std::size_t c = 0; c < b.width(); ++c) {
        if (auto col = a.column_of(b.schema()[c])) ok = ok && a.at(i, *col) == b.at(j, c);
      }
      if (!ok) continue;
      std::vector<VertexId> row(a.row(i).begin(), a.row(i).end());
      for (std::size_t c : extra) row.push_back(b.at(j, c));
      out.add_row(row);
    }
  }
  return out;
}

void sort_on_first(BindingTable& t) {
  sort_unique(t);
  t.set_sorted_on(t.schema()[0]);
}

}  // namespace

TEST(BindingTable, UnitAndEmpty) {
  BindingTable unit = BindingTable::unit();
  EXPECT_EQ(unit.width(), 0u);
  EXPECT_EQ(unit.rows(), 1u);
  BindingTable t({0, 1});
  t.add_row(std::vector<VertexId>{1, 2});
  EXPECT_EQ(op_ipj(unit, t).rows(), 1u);
  EXPECT_EQ(op_ipj(t, unit).rows(), 1u);
  EXPECT_TRUE(op_ipj(BindingTable(), t).empty());
  EXPECT_TRUE(op_ipj(t, BindingTable({1})).empty());
}

TEST(BindingTable, ColumnOf) {
  BindingTable t({4, 2, 9});
  EXPECT_EQ(t.column_of(2), 1u);
  EXPECT_FALSE(t.column_of(3).has_value());
}

TEST(BindingTable, AlgorithmChoice) {
  std::mt19937_64 rng(1);
  BindingTable a = random_table(rng, {0, 1}, 20, 5);
  BindingTable b = random_table(rng, {0, 2}, 20, 5);
  JoinAlgorithm used;
  op_ipj(a, b, &used);
  EXPECT_EQ(used, JoinAlgorithm::Hash);
  sort_on_first(a);
  sort_on_first(b);
  op_ipj(a, b, &used);
  EXPECT_EQ(used, JoinAlgorithm::Merge);
  op_ipj(a, random_table(rng, {7}, 3, 5), &used);
  EXPECT_EQ(used, JoinAlgorithm::Cross);
  op_ipj(a, random_table(rng, {1, 0}, 3, 5), &used);
  EXPECT_EQ(used, JoinAlgorithm::Hash);
}

TEST(BindingTable, SchemaOrder) {
  BindingTable a({3, 1});
  a.add_row(std::vector<VertexId>{5, 6});
  BindingTable b({1, 0});
  b.add_row(std::vector<VertexId>{6, 7});
  BindingTable j = op_ipj(a, b);
  EXPECT_EQ(j.schema(), (std::vector<std::uint32_t>{3, 1, 0}));
  ASSERT_EQ(j.rows(), 1u);
  EXPECT_EQ(j.at(0, 2), 7u);
}

TEST(BindingTable, RandomJoinsMatchNestedLoop) {
  std::mt19937_64 rng(42);
  const std::vector<std::vector<std::uint32_t>> schemas = {
      {0}, {1}, {0, 1}, {1, 2}, {0, 2}, {2, 0, 1}, {3}, {1, 3}, {}};
  for (int round = 0; round < 400; ++round) {
    auto sa = schemas[rng() % schemas.size()];
    auto sb = schemas[rng() % schemas.size()];
    BindingTable a = random_table(rng, sa, rng() % 40, 1 + rng() % 8);
    BindingTable b = random_table(rng, sb, rng() % 40, 1 + rng() % 8);
    if (sa.empty() && a.rows() > 1) a = BindingTable::unit();
    if (sb.empty() && b.rows() > 1) b = BindingTable::unit();
    auto expected = normalize(nested_loop(a, b));
    EXPECT_EQ(normalize(op_ipj(a, b)), expected) << "round " << round;
    EXPECT_EQ(normalize(hash_join(a, b)), expected) << "round " << round;
    if (!sa.empty() && !sb.empty() && sa[0] == sb[0] &&
        std::count_if(sb.begin(), sb.end(), [&](std::uint32_t v) {
          return std::find(sa.begin(), sa.end(), v) != sa.end();
        }) == 1) {
      sort_on_first(a);
      sort_on_first(b);
      EXPECT_EQ(normalize(merge_join(a, b)), normalize(nested_loop(a, b))) << "round " << round;
    }
  }
}

TEST(BindingTable, SortUnique) {
  BindingTable t({0, 1});
  for (auto r : {std::vector<VertexId>{2, 1}, {1, 5}, {2, 1}, {1, 3}}) t.add_row(r);
  sort_unique(t);
  ASSERT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.data(), (std::vector<VertexId>{1, 3, 1, 5, 2, 1}));
}
