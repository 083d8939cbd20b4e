#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace sgdq {

enum class TermKind : std::uint8_t { Iri = 0, Literal = 1 };

// An RDF term. For IRIs `lexical` is the IRI without angle brackets; for
// literals it is the full N-Triples form including quotes and any
// language/datatype suffix, e.g. "\"x\"@en". Blank nodes are IRIs in the
// reserved "bnode:" namespace.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string lexical;

  static Term iri(std::string value) { return {TermKind::Iri, std::move(value)}; }
  static Term literal(std::string value) {
    return {TermKind::Literal, std::move(value)};
  }
  // Plain string literal: wraps `text` in quotes without escaping.
  static Term plain_literal(std::string_view text) {
    return literal("\"" + std::string(text) + "\"");
  }

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_literal() const { return kind == TermKind::Literal; }

  // N-Triples spelling: <iri> or the literal form.
  std::string to_ntriples() const {
    return is_iri() ? "<" + lexical + ">" : lexical;
  }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term&, const Term&) = default;
};

// Ordering used by the attribute dictionary: lexical form first.
struct LexicalOrder {
  bool operator()(const Term& a, const Term& b) const {
    if (a.lexical != b.lexical) return a.lexical < b.lexical;
    return a.kind < b.kind;
  }
};

struct Triple {
  Term s;
  Term p;
  Term o;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

inline const Term& rdf_type() {
  static const Term kType =
      Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  return kType;
}

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    return std::hash<std::string>{}(t.lexical) * 31 +
           static_cast<std::size_t>(t.kind);
  }
};

}  // namespace sgdq

template <>
struct std::hash<sgdq::Term> : sgdq::TermHash {};
