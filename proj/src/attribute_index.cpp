#include "sgdq/attribute_index.hpp"

#include <algorithm>
#include <tuple>

#include "sgdq/error.hpp"

namespace sgdq {

AttributeIndexes::AttributeIndexes(std::uint32_t vertex_count,
                                   std::uint32_t attribute_count,
                                   std::vector<std::vector<PosEntry>> pos,
                                   std::vector<std::optional<BitVector>> comp,
                                   std::vector<PsoEntry> pso)
    : vertex_count_(vertex_count),
      attribute_count_(attribute_count),
      pos_(std::move(pos)),
      comp_(std::move(comp)),
      pso_(std::move(pso)) {}

const BitVector* AttributeIndexes::pos(PredicateId p, AttributeId o,
                                       LookupCounter* counter) const {
  if (p >= pos_.size()) return nullptr;
  const auto& group = pos_[p];
  std::size_t lo = 0, hi = group.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (counter) ++counter->comparisons;
    if (group[mid].object == o) return &group[mid].subjects;
    if (group[mid].object < o) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return nullptr;
}

const BitVector* AttributeIndexes::comp(PredicateId p) const {
  if (p >= comp_.size() || !comp_[p]) return nullptr;
  return &*comp_[p];
}

const BitVector* AttributeIndexes::pso(PredicateId p, VertexId s,
                                       LookupCounter* counter) const {
  std::size_t lo = 0, hi = pso_.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (counter) ++counter->comparisons;
    const PsoEntry& e = pso_[mid];
    if (e.predicate == p && e.subject == s) return &e.objects;
    if (std::tie(e.predicate, e.subject) < std::tie(p, s)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return nullptr;
}

AttributeIndexes build_a_indexes(const Dataset& dataset,
                                 const DictionaryR& dict_r,
                                 const DictionaryA& dict_a,
                                 const PredicateDictionary& predicates) {
  struct Row {
    PredicateId p;
    AttributeId o;
    VertexId s;
  };
  std::vector<Row> rows;
  rows.reserve(dataset.a_triples.size());
  for (const Triple& t : dataset.a_triples) {
    auto s = dict_r.find(t.s);
    auto p = predicates.find(t.p);
    auto o = dict_a.find(t.o);
    if (!s || !p || !o) {
      throw BuildError("A-Triple not covered by the dictionaries: " +
                       t.s.to_ntriples() + " " + t.p.to_ntriples());
    }
    rows.push_back({*p, *o, *s});
  }
  const std::uint32_t nv = dict_r.size();
  const std::uint32_t na = dict_a.size();

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.p, a.o, a.s) < std::tie(b.p, b.o, b.s);
  });
  std::vector<std::vector<PosEntry>> pos(predicates.size());
  std::vector<std::optional<BitVector>> comp(predicates.size());
  std::vector<std::vector<std::uint32_t>> comp_subjects(predicates.size());
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    BitVectorBuilder b(nv);
    while (j < rows.size() && rows[j].p == rows[i].p && rows[j].o == rows[i].o) {
      b.set(rows[j].s - 1);
      comp_subjects[rows[i].p].push_back(rows[j].s - 1);
      ++j;
    }
    pos[rows[i].p].push_back({rows[i].o, std::move(b).finish()});
    i = j;
  }
  for (PredicateId p = 0; p < predicates.size(); ++p) {
    auto& subjects = comp_subjects[p];
    if (subjects.empty()) continue;
    std::sort(subjects.begin(), subjects.end());
    subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
    comp[p] = BitVector::from_positions(nv, subjects);
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.p, a.s, a.o) < std::tie(b.p, b.s, b.o);
  });
  std::vector<PsoEntry> pso;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    BitVectorBuilder b(na);
    while (j < rows.size() && rows[j].p == rows[i].p && rows[j].s == rows[i].s) {
      b.set(rows[j].o - 1);
      ++j;
    }
    pso.push_back({rows[i].p, rows[i].s, std::move(b).finish()});
    i = j;
  }
  return AttributeIndexes(nv, na, std::move(pos), std::move(comp), std::move(pso));
}

BitVector candidate_rl_vertex(const APatternGroup& group,
                              const AttributeIndexes& indexes,
                              const PredicateDictionary& predicates,
                              const DictionaryA& dict_a,
                              LookupCounter* counter) {
  const std::uint32_t nv = indexes.vertex_count();
  BitVector result = BitVector::ones(nv);
  for (const APattern& pattern : group.patterns) {
    auto p = predicates.find(pattern.predicate);
    const BitVector* bits = nullptr;
    if (p) {
      if (pattern.object) {
        if (auto o = dict_a.find(*pattern.object)) {
          bits = indexes.pos(*p, *o, counter);
        }
      } else {
        bits = indexes.comp(*p);
      }
    }
    if (!bits) return BitVector::zeros(nv);
    result = bv_and(result, *bits);
  }
  return result;
}

std::vector<Term> retrieve_attribute(VertexId vertex, PredicateId predicate,
                                     const AttributeIndexes& indexes,
                                     const DictionaryA& dict_a) {
  std::vector<Term> out;
  if (const BitVector* bits = indexes.pso(predicate, vertex)) {
    bits->for_each_one([&](std::uint32_t pos) { out.push_back(dict_a.term(pos + 1)); });
  }
  return out;
}

}  // namespace sgdq
