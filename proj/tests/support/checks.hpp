#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "sgdq/engine.hpp"
#include "sgdq/generator.hpp"
#include "sgdq/store.hpp"

// Randomized property checks shared by the unit tests (small budgets) and
// the acceptance runner (full budgets). Each returns how many individual
// checks ran and keeps the first few failure messages.
namespace sgdq::testing {

struct CheckSummary {
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  std::uint64_t skipped = 0;
  std::vector<std::string> messages;

  void expect(bool ok, const std::string& what);
  bool ok() const { return failures == 0; }
  std::string describe() const;
};

std::set<std::vector<Term>> row_set(const QueryResult& result);

// Random operands of every length class against a std::vector<bool> model.
CheckSummary check_bitvector_ops(std::uint64_t seed, std::uint64_t min_checks);

// Random connected query RL-graphs (parallel edges and loops included).
CheckSummary check_decompositions(std::uint64_t seed, std::uint64_t graphs);

// Each run builds a random store and recomputes every expanded partition
// from its original range; star query matches must fit in one partition.
CheckSummary check_one_hop_cover(std::uint64_t seed, std::uint64_t runs,
                                 std::uint64_t star_queries_per_run);

struct EquivalenceOptions {
  std::vector<GeneratorKind> kinds{GeneratorKind::Random, GeneratorKind::Powerlaw,
                                   GeneratorKind::Social};
  std::vector<std::uint32_t> partition_counts{1, 2, 4, 8};
  std::vector<std::uint64_t> sizes{300, 2000, 10000};
  std::uint64_t queries_per_store = 10;
  std::uint64_t seed = 1;
  std::uint64_t oracle_budget = 4'000'000;
};

// Engine (debug mode, no duplicate matches) against the oracle.
CheckSummary check_oracle_equivalence(const EquivalenceOptions& options);

struct RobustnessSummary : CheckSummary {
  std::uint64_t queries = 0;
  std::uint64_t within_corrected_bound = 0;
  std::uint64_t within_literal_bound = 0;
};

// Random valid match orders give identical results and Op_sp counts within
// the per-component bound.
RobustnessSummary check_order_robustness(std::uint64_t seed, std::uint64_t queries,
                                         std::uint64_t orders_per_query);

// Random builds: alpha >= 1 and alpha recomputed from the partitions.
CheckSummary check_alpha(std::uint64_t seed, std::uint64_t runs);

}  // namespace sgdq::testing
