#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgdq/bitvector.hpp"
#include "sgdq/dataset.hpp"
#include "sgdq/dictionary.hpp"

namespace sgdq {

// Counts key comparisons made by index lookups.
struct LookupCounter {
  std::uint64_t comparisons = 0;
};

// ABIdx_POS: per predicate, entries sorted by object AttributeID, each with
// a BitVector over VertexIDs.
struct PosEntry {
  AttributeId object = 0;
  BitVector subjects;
};

// ABIdx_PSO: one BitVector over AttributeIDs per (predicate, subject).
struct PsoEntry {
  PredicateId predicate = 0;
  VertexId subject = 0;
  BitVector objects;
};

// The three bitmap indexes over D_A.
class AttributeIndexes {
 public:
  AttributeIndexes() = default;
  AttributeIndexes(std::uint32_t vertex_count, std::uint32_t attribute_count,
                   std::vector<std::vector<PosEntry>> pos,
                   std::vector<std::optional<BitVector>> comp,
                   std::vector<PsoEntry> pso);

  std::uint32_t vertex_count() const { return vertex_count_; }
  std::uint32_t attribute_count() const { return attribute_count_; }

  // nullptr when (p, o) has no A-Triple.
  const BitVector* pos(PredicateId p, AttributeId o,
                       LookupCounter* counter = nullptr) const;
  const BitVector* comp(PredicateId p) const;
  const BitVector* pso(PredicateId p, VertexId s,
                       LookupCounter* counter = nullptr) const;

  const std::vector<std::vector<PosEntry>>& pos_groups() const { return pos_; }
  const std::vector<std::optional<BitVector>>& comp_entries() const {
    return comp_;
  }
  const std::vector<PsoEntry>& pso_entries() const { return pso_; }

 private:
  std::uint32_t vertex_count_ = 0;
  std::uint32_t attribute_count_ = 0;
  std::vector<std::vector<PosEntry>> pos_;   // indexed by PredicateId
  std::vector<std::optional<BitVector>> comp_;
  std::vector<PsoEntry> pso_;                // sorted by (predicate, subject)
};

AttributeIndexes build_a_indexes(const Dataset& dataset,
                                 const DictionaryR& dict_r,
                                 const DictionaryA& dict_a,
                                 const PredicateDictionary& predicates);

// A-Pattern attached to a subject: Pattern-I when `object` is bound,
// Pattern-II when it is a variable (nullopt).
struct APattern {
  Term predicate;
  std::optional<Term> object;
};

struct APatternGroup {
  std::string subject;  // variable name or constant spelling, informational
  std::vector<APattern> patterns;
};

// AND of ABIdx_POS[p][o] for Pattern-I and ABIdx_comp[p] for Pattern-II.
// Unknown predicates or objects yield all-zeros.
BitVector candidate_rl_vertex(const APatternGroup& group,
                              const AttributeIndexes& indexes,
                              const PredicateDictionary& predicates,
                              const DictionaryA& dict_a,
                              LookupCounter* counter = nullptr);

// Attribute values of `vertex` under `predicate`, in AttributeID order.
std::vector<Term> retrieve_attribute(VertexId vertex, PredicateId predicate,
                                     const AttributeIndexes& indexes,
                                     const DictionaryA& dict_a);

}  // namespace sgdq
