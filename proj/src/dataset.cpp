#include "sgdq/dataset.hpp"

#include <algorithm>
#include <istream>
#include <string>

#include "sgdq/error.hpp"

namespace sgdq {

PredicateClasses classify_predicates(std::span<const Triple> triples,
                                     const std::set<Term>& forced_attributes) {
  struct Seen {
    bool literal = false;
    bool resource = false;
  };
  std::map<Term, Seen> seen;
  for (const Triple& t : triples) {
    Seen& s = seen[t.p];
    (t.o.is_literal() ? s.literal : s.resource) = true;
  }
  PredicateClasses classes;
  for (const auto& [p, s] : seen) {
    bool attribute = p == rdf_type() || forced_attributes.count(p) > 0 ||
                     !s.resource;
    if (!attribute && s.literal) {
      throw ClassificationError("predicate <" + p.lexical +
                                "> has both literal and resource objects; "
                                "list it as an attribute predicate");
    }
    classes.emplace(p, attribute ? PredicateClass::Attribute
                                 : PredicateClass::Relation);
  }
  return classes;
}

Dataset split_dataset(std::span<const Triple> triples,
                      const PredicateClasses& classes) {
  Dataset d;
  d.triples.assign(triples.begin(), triples.end());
  std::sort(d.triples.begin(), d.triples.end());
  d.triples.erase(std::unique(d.triples.begin(), d.triples.end()),
                  d.triples.end());
  for (const Triple& t : d.triples) {
    auto it = classes.find(t.p);
    if (it == classes.end()) {
      throw BuildError("predicate <" + t.p.lexical + "> is not classified");
    }
    (it->second == PredicateClass::Attribute ? d.a_triples : d.r_triples)
        .push_back(t);
  }
  d.classes = classes;
  return d;
}

Dataset load_dataset(std::span<const Triple> triples,
                     const std::set<Term>& forced_attributes) {
  return split_dataset(triples, classify_predicates(triples, forced_attributes));
}

std::set<Term> read_attribute_predicates(std::istream& in) {
  std::set<Term> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    // '#' inside an IRI is part of it when the line is bracketed.
    if (hash != std::string::npos && line.find('<') == std::string::npos) {
      line.resize(hash);
    }
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string v = line.substr(b, e - b + 1);
    if (v.front() == '#') continue;
    if (v.front() == '<') {
      auto close = v.find('>');
      v = v.substr(1, close == std::string::npos ? std::string::npos : close - 1);
    }
    if (!v.empty()) out.insert(Term::iri(v));
  }
  return out;
}

}  // namespace sgdq
