#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sgdq/term.hpp"

namespace sgdq {

// Parses line-oriented N-Triples. Comments and blank lines are skipped;
// duplicates are kept (deduplication happens in split_dataset). Throws
// ParseError with the 1-based line/column of the first malformed statement.
std::vector<Triple> parse_ntriples(std::istream& in);
std::vector<Triple> parse_ntriples(std::string_view text);

// Parses a single term in N-Triples syntax ("<iri>", "_:b", or a literal).
Term parse_ntriples_term(std::string_view text);

void write_ntriples(std::ostream& out, std::span<const Triple> triples);

}  // namespace sgdq
