#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgdq/bitvector.hpp"
#include "sgdq/dataset.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/rl_graph.hpp"

namespace sgdq {

struct PartitionOptions {
  std::uint32_t n = 2;
  double balance_eps = 0.05;
  std::uint64_t seed = 1;
  int refinement_passes = 4;
  int initial_tries = 8;
};

// Largest allowed part: ceil((1 + eps) * |V| / n).
std::uint32_t max_part_size(std::uint32_t vertex_count, std::uint32_t n,
                            double balance_eps);

// Multilevel edge-cut partitioning (heavy-edge matching, greedy growing,
// boundary refinement). Edge direction, labels, and self-loops are ignored.
// Throws BuildError if n == 0 or n > |V_R|.
std::vector<OriginalPartition> partition_rl_graph(const RlGraph& graph,
                                                  const PartitionOptions& options);

// Partitions from an external assignment (partition id per vertex index).
// Unset entries (nullopt) or ids >= n throw BuildError naming the vertex.
// Empty partitions produce a warning.
std::vector<OriginalPartition> import_partition(
    std::span<const std::optional<std::uint32_t>> assignment, std::uint32_t n,
    const RlGraph& graph, std::vector<std::string>* warnings = nullptr);

// METIS-style partition file: line k holds the partition of vertex k-1.
std::vector<std::optional<std::uint32_t>> read_partition_file(std::istream& in);
void write_partition_file(std::ostream& out,
                          std::span<const std::uint32_t> assignment);

// METIS graph format (undirected, deduplicated, 1-based) of the RL-graph.
void write_metis_graph(std::ostream& out, const RlGraph& graph);

// Number of RL edges whose endpoints lie in different partitions.
std::uint64_t count_cut_edges(const RlGraph& graph,
                              std::span<const std::uint32_t> assignment);

// auto n = clamp(|D_R| / 2e6, 2, 500), capped at |V_R|.
std::uint32_t auto_partition_count(std::size_t r_triple_count,
                                   std::uint32_t rl_vertex_count);

// A 1-UHC partition. Edge indices refer to the renumbered RL-graph, where
// vertex index i is VertexID i+1.
struct ExpandedPartition {
  std::uint32_t id = 0;
  std::vector<std::uint32_t> edges;  // sorted edge indices
  BitVector p_vector;                // over all VertexIDs
  VertexRange original_range;
};

// Adds every edge incident to the original vertices and every edge between
// two of their outside neighbours. `vertex_id_count` is the BitVector length
// (|V_R| plus A-only subjects).
ExpandedPartition expand_1uhc(const OriginalPartition& original,
                              const RlGraph& graph, VertexRange original_range,
                              std::uint32_t vertex_id_count);

struct PartitionReport {
  std::uint32_t n = 0;
  std::uint64_t cut_edges = 0;
  double alpha = 1.0;
  std::uint64_t dataset_triples = 0;
  std::uint64_t a_triples = 0;
  std::uint64_t r_triples = 0;
  std::uint64_t partition_triples = 0;  // sum of |P_i|
};

// alpha = (|D_A| + sum |P_i|) / |D|; 1 for an empty dataset.
PartitionReport compute_report(const Dataset& dataset, const RlGraph& graph,
                               std::span<const OriginalPartition> originals,
                               std::span<const ExpandedPartition> expanded);

void write_report_table(std::ostream& out, const PartitionReport& report);
void write_report_kv(std::ostream& out, const PartitionReport& report);

}  // namespace sgdq
