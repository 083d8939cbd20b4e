#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "checks.hpp"
#include "fixture.hpp"
#include "sgdq/generator.hpp"
#include "sgdq/partitioner.hpp"

using namespace sgdq;
using namespace sgdq::testing;

namespace {

struct Graph {
  Dataset dataset;
  PredicateDictionary predicates;
  RlGraph rl;
};

Graph graph_of(std::span<const Triple> triples) {
  Graph g;
  g.dataset = load_dataset(triples);
  g.predicates = PredicateDictionary(g.dataset.classes);
  g.rl = build_rl_graph(g.dataset, g.predicates);
  return g;
}

void expect_disjoint_cover(const RlGraph& g, const std::vector<OriginalPartition>& parts,
                           std::uint32_t max_size) {
  std::vector<int> seen(g.vertex_count(), 0);
  for (const auto& p : parts) {
    EXPECT_FALSE(p.vertices.empty()) << "partition " << p.id;
    EXPECT_LE(p.vertices.size(), max_size) << "partition " << p.id;
    for (std::uint32_t v : p.vertices) ++seen[v];
  }
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) ASSERT_EQ(seen[v], 1) << v;
}

}  // namespace

TEST(Partitioner, MaxPartSize) {
  EXPECT_EQ(max_part_size(100, 4, 0.05), 27u);
  EXPECT_EQ(max_part_size(9, 2, 0.05), 5u);
  EXPECT_EQ(max_part_size(10, 3, 0.0), 4u);
}

TEST(Partitioner, BalancedDisjointCover) {
  for (auto kind : {GeneratorKind::Random, GeneratorKind::Powerlaw, GeneratorKind::Social}) {
    Graph g = graph_of(generate_dataset(kind, 5000, 4));
    for (std::uint32_t n : {2u, 3u, 5u, 8u}) {
      PartitionOptions o;
      o.n = n;
      auto parts = partition_rl_graph(g.rl, o);
      ASSERT_EQ(parts.size(), n);
      expect_disjoint_cover(g.rl, parts, max_part_size(g.rl.vertex_count(), n, o.balance_eps));
      // Internal edges are exactly the uncut ones.
      auto assign = assignment_of(g.rl, parts);
      std::size_t internal = 0;
      for (const auto& p : parts) {
        internal += p.edges.size();
        for (std::uint32_t e : p.edges) {
          EXPECT_EQ(assign[g.rl.edges()[e].from], p.id);
          EXPECT_EQ(assign[g.rl.edges()[e].to], p.id);
        }
      }
      EXPECT_EQ(internal + count_cut_edges(g.rl, assign), g.rl.edge_count());
    }
  }
}

TEST(Partitioner, DeterministicInSeed) {
  Graph g = graph_of(generate_dataset(GeneratorKind::Social, 4000, 8));
  PartitionOptions o;
  o.n = 4;
  o.seed = 17;
  auto a = assignment_of(g.rl, partition_rl_graph(g.rl, o));
  auto b = assignment_of(g.rl, partition_rl_graph(g.rl, o));
  EXPECT_EQ(a, b);
}

TEST(Partitioner, BeatsRandomAssignment) {
  Graph g = graph_of(generate_dataset(GeneratorKind::Social, 20000, 2));
  PartitionOptions o;
  o.n = 4;
  auto cut = count_cut_edges(g.rl, assignment_of(g.rl, partition_rl_graph(g.rl, o)));
  std::vector<std::uint32_t> round_robin(g.rl.vertex_count());
  for (std::uint32_t v = 0; v < round_robin.size(); ++v) round_robin[v] = v % 4;
  EXPECT_LT(cut, count_cut_edges(g.rl, round_robin));
}

TEST(Partitioner, FixtureCut) {
  Graph g = graph_of(fixture_triples());
  PartitionOptions o;
  o.n = 2;
  auto parts = partition_rl_graph(g.rl, o);
  EXPECT_LE(count_cut_edges(g.rl, assignment_of(g.rl, parts)), 1u);
  std::vector<std::uint32_t> given;
  for (auto p : fixture_assignment()) given.push_back(*p);
  EXPECT_EQ(count_cut_edges(g.rl, given), 1u);
}

TEST(Partitioner, Errors) {
  Graph g = graph_of(fixture_triples());
  PartitionOptions o;
  o.n = 0;
  EXPECT_THROW(partition_rl_graph(g.rl, o), BuildError);
  o.n = 10;
  EXPECT_THROW(partition_rl_graph(g.rl, o), BuildError);
  o.n = 9;
  EXPECT_EQ(partition_rl_graph(g.rl, o).size(), 9u);
}

TEST(Partitioner, SinglePartition) {
  Graph g = graph_of(fixture_triples());
  PartitionOptions o;
  o.n = 1;
  auto parts = partition_rl_graph(g.rl, o);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].vertices.size(), 9u);
  EXPECT_EQ(parts[0].edges.size(), 9u);
}

TEST(Partitioner, ImportPartition) {
  Graph g = graph_of(fixture_triples());
  auto assign = fixture_assignment();
  auto parts = import_partition(assign, 2, g.rl);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].vertices.size(), 5u);
  EXPECT_EQ(parts[1].vertices.size(), 4u);

  std::vector<std::string> warnings;
  import_partition(assign, 3, g.rl, &warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("partition 2"), std::string::npos);

  auto missing = assign;
  missing[4] = std::nullopt;
  EXPECT_THROW(import_partition(missing, 2, g.rl), BuildError);
  auto out_of_range = assign;
  out_of_range[0] = 2;
  EXPECT_THROW(import_partition(out_of_range, 2, g.rl), BuildError);
  auto short_list = assign;
  short_list.pop_back();
  EXPECT_THROW(import_partition(short_list, 2, g.rl), BuildError);
}

TEST(Partitioner, PartitionFileFormat) {
  std::istringstream in("0\n1\n\n-\n  2 \n");
  auto a = read_partition_file(in);
  // Line k is vertex k-1; blank lines and '-' leave the vertex unassigned.
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a[0], 0u);
  EXPECT_EQ(a[1], 1u);
  EXPECT_FALSE(a[2].has_value());
  EXPECT_FALSE(a[3].has_value());
  EXPECT_EQ(a[4], 2u);
  std::istringstream bad("0\nx\n");
  EXPECT_THROW(read_partition_file(bad), BuildError);

  std::ostringstream out;
  std::vector<std::uint32_t> v{1, 0, 1};
  write_partition_file(out, v);
  EXPECT_EQ(out.str(), "1\n0\n1\n");
}

TEST(Partitioner, MetisGraph) {
  Graph g = graph_of(fixture_triples());
  std::ostringstream out;
  write_metis_graph(out, g.rl);
  std::istringstream in(out.str());
  std::size_t nv = 0, ne = 0;
  in >> nv >> ne;
  EXPECT_EQ(nv, 9u);
  EXPECT_EQ(ne, 9u);
  std::string line;
  std::getline(in, line);
  std::size_t degree_sum = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::size_t x;
    while (ls >> x) {
      EXPECT_GE(x, 1u);
      EXPECT_LE(x, 9u);
      ++degree_sum;
    }
  }
  EXPECT_EQ(degree_sum, 2 * ne);
}

TEST(Partitioner, AutoCount) {
  EXPECT_EQ(auto_partition_count(1000, 500), 2u);
  EXPECT_EQ(auto_partition_count(10'000'000, 1'000'000), 5u);
  EXPECT_EQ(auto_partition_count(5'000'000'000ull, 1'000'000), 500u);
  EXPECT_EQ(auto_partition_count(1000, 1), 1u);
}

TEST(Partitioner, FixtureExpansionAndAlpha) {
  Store s = fixture_store();
  ASSERT_EQ(s.partitions.size(), 2u);
  EXPECT_EQ(s.partitions[0].size(), 5u);
  EXPECT_EQ(s.partitions[1].size(), 5u);
  // {u1,u3,p1,r1,r2} plus r3; {u2,p2,r3,r4} plus p1.
  EXPECT_EQ(s.partitions[0].p_vector().to_string(), "111110010");
  EXPECT_EQ(s.partitions[1].p_vector().to_string(), "001001111");
  EXPECT_EQ(s.report.cut_edges, 1u);
  EXPECT_EQ(s.report.partition_triples, 10u);
  EXPECT_DOUBLE_EQ(s.report.alpha, 25.0 / 24.0);

  BuildOptions one;
  one.partitions = 1;
  Store single = build_store(fixture_triples(), one);
  EXPECT_EQ(single.report.alpha, 1.0);
  EXPECT_EQ(single.report.cut_edges, 0u);
}

TEST(Partitioner, ReportFormats) {
  Store s = fixture_store();
  std::ostringstream kv;
  write_report_kv(kv, s.report);
  EXPECT_NE(kv.str().find("cut_edges=1\n"), std::string::npos);
  EXPECT_NE(kv.str().find("alpha=1.0416666666666667\n"), std::string::npos);
  std::ostringstream table;
  write_report_table(table, s.report);
  EXPECT_NE(table.str().find("1.0417"), std::string::npos);
}

TEST(Partitioner, OneHopCoverRandom) {
  auto sum = check_one_hop_cover(3, 12, 5);
  EXPECT_TRUE(sum.ok()) << sum.describe();
}

TEST(Partitioner, AlphaRandom) {
  auto sum = check_alpha(5, 15);
  EXPECT_TRUE(sum.ok()) << sum.describe();
}
