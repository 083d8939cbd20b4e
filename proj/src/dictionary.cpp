#include "sgdq/dictionary.hpp"

#include <algorithm>

#include "sgdq/error.hpp"

namespace sgdq {

PredicateDictionary::PredicateDictionary(const PredicateClasses& classes) {
  for (const auto& [term, cls] : classes) {
    ids_.emplace(term, static_cast<PredicateId>(terms_.size()));
    terms_.push_back(term);
    classes_.push_back(cls);
  }
}

std::optional<PredicateId> PredicateDictionary::find(const Term& predicate) const {
  auto it = ids_.find(predicate);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

DictionaryR::DictionaryR(std::vector<Term> terms, std::vector<VertexRange> ranges,
                         std::uint32_t rl_vertex_count)
    : terms_(std::move(terms)),
      ranges_(std::move(ranges)),
      rl_vertex_count_(rl_vertex_count) {
  ids_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!ids_.emplace(terms_[i], static_cast<VertexId>(i + 1)).second) {
      throw BuildError("duplicate vertex term " + terms_[i].to_ntriples());
    }
  }
}

std::optional<VertexId> DictionaryR::find(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

DictionaryA DictionaryA::from_a_triples(std::span<const Triple> a_triples) {
  std::vector<Term> terms;
  terms.reserve(a_triples.size());
  for (const Triple& t : a_triples) terms.push_back(t.o);
  std::sort(terms.begin(), terms.end(), LexicalOrder{});
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return DictionaryA(std::move(terms));
}

DictionaryA::DictionaryA(std::vector<Term> terms) : terms_(std::move(terms)) {
  ids_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !LexicalOrder{}(terms_[i - 1], terms_[i])) {
      throw BuildError("attribute terms are not sorted");
    }
    ids_.emplace(terms_[i], static_cast<AttributeId>(i + 1));
  }
}

std::optional<AttributeId> DictionaryA::find(const Term& term) const {
  auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace sgdq
