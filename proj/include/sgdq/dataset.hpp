#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "sgdq/term.hpp"

namespace sgdq {

enum class PredicateClass : std::uint8_t { Relation, Attribute };

using PredicateClasses = std::map<Term, PredicateClass>;

// A predicate is an attribute iff it is rdf:type, is listed in
// `forced_attributes`, or every one of its objects is a literal. A relation
// that also has literal objects raises ClassificationError.
PredicateClasses classify_predicates(std::span<const Triple> triples,
                                     const std::set<Term>& forced_attributes);

// The deduplicated dataset D split into A-Triples and R-Triples. All three
// vectors are sorted.
struct Dataset {
  std::vector<Triple> triples;
  std::vector<Triple> a_triples;
  std::vector<Triple> r_triples;
  PredicateClasses classes;

  std::size_t size() const { return triples.size(); }
};

Dataset split_dataset(std::span<const Triple> triples,
                      const PredicateClasses& classes);

// Convenience: classify then split.
Dataset load_dataset(std::span<const Triple> triples,
                     const std::set<Term>& forced_attributes = {});

// One IRI per line, with or without angle brackets; '#' starts a comment.
std::set<Term> read_attribute_predicates(std::istream& in);

}  // namespace sgdq
