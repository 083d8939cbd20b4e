#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sgdq/error.hpp"
#include "sgdq/term.hpp"

namespace sgdq {

struct Variable {
  std::string name;  // without the leading '?'
  friend auto operator<=>(const Variable&, const Variable&) = default;
};

using QueryTerm = std::variant<Variable, Term>;

inline bool is_variable(const QueryTerm& t) {
  return std::holds_alternative<Variable>(t);
}
inline const std::string& variable_name(const QueryTerm& t) {
  return std::get<Variable>(t).name;
}
std::string to_string(const QueryTerm& t);

// Predicates are never variables.
struct TriplePattern {
  QueryTerm s;
  Term p;
  QueryTerm o;
};

// Conjunctive SELECT query.
struct Query {
  std::map<std::string, std::string> prefixes;
  bool select_all = false;
  std::vector<std::string> select;
  std::vector<TriplePattern> patterns;

  // Variables in order of first appearance in the patterns.
  std::vector<std::string> variables() const;
  // SELECT list, or all variables for SELECT *. Projected variables that
  // occur in no pattern stay unbound (empty Term) in every row.
  std::vector<std::string> projection() const;
};

// Grammar: PREFIX declarations, SELECT [DISTINCT] (?v ... | *), [WHERE]
// '{' triple patterns separated by '.' '}'. Supports <iri>, prefixed names,
// 'a', literals with @lang / ^^datatype, bare numbers, and the ';' / ','
// abbreviations. Throws ParseError (syntax, unknown prefix),
// UnsupportedFeatureError (predicate variables, FILTER, OPTIONAL, ...), and
// QueryError (no patterns, disconnected patterns).
Query parse_query(std::string_view text);

}  // namespace sgdq
