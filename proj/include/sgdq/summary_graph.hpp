#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sgdq/bitvector.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/partitioner.hpp"
#include "sgdq/rl_graph.hpp"

namespace sgdq {

// Partitions as vertices; an edge per pair of partitions connected by some
// RL edge (parallel edges collapsed into a multiplicity) and a loop on every
// vertex. Labels are the distinct predicates of the expanded partitions.
class SummaryGraph {
 public:
  using Adjacency = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

  SummaryGraph() = default;
  SummaryGraph(std::vector<Adjacency> adjacency,
               std::vector<std::vector<PredicateId>> labels);

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(adjacency_.size());
  }
  // Other partitions with their RL-edge multiplicity, ascending.
  const Adjacency& adjacency(std::uint32_t i) const { return adjacency_.at(i); }
  // Number of distinct inter-partition pairs.
  std::size_t edge_count() const;
  std::size_t loop_count() const { return adjacency_.size(); }

  // Adjacent partitions plus `i` itself, ascending. Throws std::out_of_range.
  std::vector<std::uint32_t> neighbors(std::uint32_t i) const;
  const DenseBits& neighbor_mask(std::uint32_t i) const {
    return neighbor_masks_.at(i);
  }
  bool adjacent_or_self(std::uint32_t i, std::uint32_t j) const {
    return neighbor_masks_.at(i).test(j);
  }

  const std::vector<PredicateId>& labels(std::uint32_t i) const {
    return labels_.at(i);
  }

  // Bit i set iff every required predicate is a label of partition i. An
  // unknown predicate (nullopt) matches no partition.
  BitVector label_subset_candidates(
      std::span<const std::optional<PredicateId>> required) const;

 private:
  std::vector<Adjacency> adjacency_;
  std::vector<std::vector<PredicateId>> labels_;
  std::vector<DenseBits> neighbor_masks_;
};

SummaryGraph build_summary_graph(const RlGraph& graph,
                                 std::span<const std::uint32_t> assignment,
                                 std::span<const ExpandedPartition> expanded);

// Text form, one vertex per line:
//   <id> | <neighbor>:<multiplicity> ... | <predicate IRI> ...
void write_summary_graph(std::ostream& out, const SummaryGraph& sg,
                         const PredicateDictionary& predicates);
// Throws StoreCorruptError on malformed input.
SummaryGraph read_summary_graph(std::istream& in,
                                const PredicateDictionary& predicates);

}  // namespace sgdq
