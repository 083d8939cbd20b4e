#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sgdq/bitvector.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/query.hpp"

namespace sgdq {

// Vertex of the query RL-graph: a variable or a constant term.
struct QueryVertex {
  QueryTerm term;
  bool is_variable() const { return sgdq::is_variable(term); }
};

// R-Pattern as an edge between query vertices.
struct RPattern {
  std::uint32_t s = 0;
  std::uint32_t o = 0;
  Term predicate;
  std::optional<PredicateId> predicate_id;  // nullopt: unknown to the dataset
  std::size_t text_index = 0;               // position in the query text
};

enum class SubQueryKind : std::uint8_t { TypeI, TypeII };

// Q^p_i. TypeI holds one pattern; TypeII holds patterns forming a complete
// undirected graph over `vertices`.
struct SubQuery {
  std::uint32_t id = 0;
  SubQueryKind kind = SubQueryKind::TypeI;
  std::vector<RPattern> patterns;
  std::vector<std::uint32_t> vertices;  // query vertex indices, ascending
};

// CR(v) for every query vertex, plus resolved constants.
struct FilterContext {
  struct Entry {
    DenseBits mask;
    bool is_variable = true;
    std::optional<VertexId> constant;  // set for constants found in M_R
    std::uint32_t popcount = 0;
  };
  std::vector<Entry> vertices;

  bool admits(std::uint32_t vertex, VertexId id) const {
    return vertices[vertex].mask.test(id - 1);
  }
};

}  // namespace sgdq
