#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "sgdq/dataset.hpp"
#include "sgdq/term.hpp"

namespace sgdq {

// VertexIDs and AttributeIDs are 1-based; bit i-1 of a vertex BitVector
// stands for VertexID i.
using VertexId = std::uint32_t;
using AttributeId = std::uint32_t;
using PredicateId = std::uint32_t;

// Inclusive VertexID interval. Empty when first > last.
struct VertexRange {
  VertexId first = 1;
  VertexId last = 0;

  bool contains(VertexId v) const { return v >= first && v <= last; }
  std::uint32_t size() const { return last >= first ? last - first + 1 : 0; }
  friend bool operator==(const VertexRange&, const VertexRange&) = default;
};

// Predicates of the dataset in sorted order together with their class.
class PredicateDictionary {
 public:
  PredicateDictionary() = default;
  explicit PredicateDictionary(const PredicateClasses& classes);

  std::optional<PredicateId> find(const Term& predicate) const;
  const Term& term(PredicateId id) const { return terms_.at(id); }
  PredicateClass predicate_class(PredicateId id) const { return classes_.at(id); }
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  std::vector<PredicateClass> classes_;
  std::unordered_map<Term, PredicateId> ids_;
};

// M_R: VertexID <-> Term. Vertices of each original partition occupy one
// contiguous range; subjects that only occur in A-Triples follow after all
// partition ranges.
class DictionaryR {
 public:
  DictionaryR() = default;
  DictionaryR(std::vector<Term> terms, std::vector<VertexRange> ranges,
              std::uint32_t rl_vertex_count);

  std::optional<VertexId> find(const Term& term) const;
  const Term& term(VertexId id) const { return terms_.at(id - 1); }

  // Total number of VertexIDs, including A-only subjects.
  std::uint32_t size() const { return static_cast<std::uint32_t>(terms_.size()); }
  // |V_R|: vertices of the RL-graph.
  std::uint32_t rl_vertex_count() const { return rl_vertex_count_; }
  const std::vector<VertexRange>& partition_ranges() const { return ranges_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  std::vector<VertexRange> ranges_;
  std::uint32_t rl_vertex_count_ = 0;
  std::unordered_map<Term, VertexId> ids_;
};

// M_A: AttributeID <-> Term, IDs assigned in LexicalOrder.
class DictionaryA {
 public:
  DictionaryA() = default;
  // Builds from the objects of `a_triples`.
  static DictionaryA from_a_triples(std::span<const Triple> a_triples);
  // `terms` must already be sorted and unique under LexicalOrder.
  explicit DictionaryA(std::vector<Term> terms);

  std::optional<AttributeId> find(const Term& term) const;
  const Term& term(AttributeId id) const { return terms_.at(id - 1); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(terms_.size()); }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, AttributeId> ids_;
};

}  // namespace sgdq
