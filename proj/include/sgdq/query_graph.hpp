#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgdq/attribute_index.hpp"
#include "sgdq/dictionary.hpp"
#include "sgdq/query.hpp"
#include "sgdq/subquery.hpp"

namespace sgdq {

// G^Q_R. Vertices are the distinct subjects/objects of R-Patterns followed
// by subjects that only carry A-Patterns, in order of first appearance.
struct QueryRlGraph {
  std::vector<QueryVertex> vertices;
  std::vector<RPattern> edges;
  // Number of leading vertices that touch at least one R-Pattern.
  std::uint32_t rl_vertex_count = 0;
};

struct AttributePattern {
  std::uint32_t subject = 0;  // query vertex
  Term predicate;
  std::optional<PredicateId> predicate_id;
  QueryTerm object;
  std::size_t text_index = 0;
};

struct SplitQuery {
  QueryRlGraph graph;                      // Q_R
  std::vector<AttributePattern> a_patterns;
  std::vector<APatternGroup> a_groups;     // Q_A, indexed by query vertex
  bool known_empty = false;                // some predicate is unknown
  std::vector<std::string> warnings;

  std::optional<std::uint32_t> vertex_of(const QueryTerm& term) const;
};

// Throws QueryError when a pattern's subject is a literal. Unknown
// predicates are treated as relations, produce a warning, and set
// known_empty; so does a relation pattern with a literal object.
SplitQuery split_query(const Query& query, const PredicateDictionary& predicates);

// TG^Q.
struct TransformedQueryGraph {
  std::vector<SubQuery> subqueries;
  std::vector<std::vector<std::uint32_t>> adjacency;  // ascending
  std::vector<std::vector<Term>> labels;              // distinct predicates

  std::size_t size() const { return subqueries.size(); }
  std::size_t edge_count() const;
  bool adjacent(std::uint32_t i, std::uint32_t j) const;
  // Connected components, each ascending, ordered by smallest member.
  std::vector<std::vector<std::uint32_t>> components() const;
};

// Greedy decomposition: repeatedly take the remaining vertex of maximum
// degree and extract the complete subgraphs through it (largest first,
// triangles and up), then its leftover edges as TypeI sub-queries (TypeII
// when several patterns join the same pair). Ties follow pattern text order.
TransformedQueryGraph decompose(const QueryRlGraph& graph);

}  // namespace sgdq
