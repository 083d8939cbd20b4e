#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgdq/dataset.hpp"
#include "sgdq/dictionary.hpp"

namespace sgdq {

// Directed labeled edge of an RL-graph, endpoints are vertex indices.
struct RlEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  PredicateId predicate = 0;

  friend auto operator<=>(const RlEdge&, const RlEdge&) = default;
};

// Resource-Linkage graph of D_R. Vertex index i is provisional (sorted term
// order) until the graph is renumbered, after which index i is VertexID i+1.
class RlGraph {
 public:
  RlGraph() = default;
  RlGraph(std::vector<Term> vertices, std::vector<RlEdge> edges);

  std::uint32_t vertex_count() const {
    return static_cast<std::uint32_t>(vertices_.size());
  }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Term>& vertices() const { return vertices_; }
  const std::vector<RlEdge>& edges() const { return edges_; }

  // Edge indices incident to `v` in either direction (a self-loop once).
  std::span<const std::uint32_t> incident(std::uint32_t v) const {
    return {incident_.data() + offsets_[v], incident_.data() + offsets_[v + 1]};
  }
  std::uint32_t other_end(std::uint32_t edge, std::uint32_t v) const {
    const auto& e = edges_[edge];
    return e.from == v ? e.to : e.from;
  }

  // Returns the graph with vertex `i` moved to index `new_index[i]`.
  RlGraph renumbered(std::span<const std::uint32_t> new_index) const;

 private:
  std::vector<Term> vertices_;
  std::vector<RlEdge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> incident_;
};

RlGraph build_rl_graph(const Dataset& dataset,
                       const PredicateDictionary& predicates);

// Disjoint vertex group of an edge-cut partitioning. `edges` are the indices
// of edges with both endpoints inside the group.
struct OriginalPartition {
  std::uint32_t id = 0;
  std::vector<std::uint32_t> vertices;
  std::vector<std::uint32_t> edges;
};

// Builds partitions from a per-vertex assignment (values < n).
std::vector<OriginalPartition> partitions_from_assignment(
    const RlGraph& graph, std::span<const std::uint32_t> assignment,
    std::uint32_t n);

// Partition id of each vertex. Throws BuildError if the partitions are not a
// disjoint cover of the graph's vertices.
std::vector<std::uint32_t> assignment_of(
    const RlGraph& graph, std::span<const OriginalPartition> partitions);

struct VertexNumbering {
  DictionaryR dictionary;
  // new_index[i] = final VertexID of provisional vertex i, minus one.
  std::vector<std::uint32_t> new_index;
};

// Allocates VertexIDs consecutively per partition (partition order, then
// provisional order inside a partition) and appends `a_only_subjects`.
VertexNumbering assign_vertex_ids(const RlGraph& graph,
                                  std::span<const OriginalPartition> partitions,
                                  std::span<const Term> a_only_subjects = {});

// Subjects of A-Triples that never occur in D_R, sorted.
std::vector<Term> a_only_subjects(const Dataset& dataset);

// Remaps partition vertex lists after renumbering.
std::vector<OriginalPartition> renumber_partitions(
    std::span<const OriginalPartition> partitions,
    std::span<const std::uint32_t> new_index);

}  // namespace sgdq
