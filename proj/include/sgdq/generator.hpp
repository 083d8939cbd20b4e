#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sgdq/term.hpp"

namespace sgdq {

enum class GeneratorKind : std::uint8_t { Random, Powerlaw, Social };

std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

// Exactly `triples` distinct triples, mixing relation and attribute
// predicates, deterministic in `seed`. Social data follows a
// users/posts/replies schema; powerlaw data has a Zipf-like degree
// distribution.
std::vector<Triple> generate_dataset(GeneratorKind kind, std::uint64_t triples,
                                     std::uint64_t seed);

}  // namespace sgdq
