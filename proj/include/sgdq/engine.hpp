#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sgdq/binding_table.hpp"
#include "sgdq/query.hpp"
#include "sgdq/query_graph.hpp"
#include "sgdq/store.hpp"
#include "sgdq/subquery.hpp"

namespace sgdq {

// Anchored: every sub-query keeps only rows whose home vertex lies in the
// partition's original range, on every Op_sp. LastOnly: verify only at the
// last match position (subject range for TypeI, k-1 quorum for TypeII).
enum class VerifyPolicy : std::uint8_t { Anchored, LastOnly };
enum class OrderPolicy : std::uint8_t { Auto, Id, Random };

struct EngineOptions {
  VerifyPolicy verify = VerifyPolicy::Anchored;
  OrderPolicy order = OrderPolicy::Auto;
  std::uint64_t order_seed = 0;
  bool prune_empty = true;       // drop partitions after an empty Op_sp
  bool memoize = true;           // reuse Op_sp results per (sub-query, partition)
  bool summary_pruning = true;   // summary-graph adjacency in candidate regions
  unsigned parallel = 1;         // workers for the top-level candidate loop
  bool debug = false;            // re-check rows against the dataset
};

struct EngineStats {
  std::uint64_t op_sp_count = 0;
  std::uint64_t op_ipj_count = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t pruned_partitions = 0;
  std::uint64_t matches = 0;  // rows reported by the summary-graph match
  std::uint64_t results = 0;  // final decoded rows
  std::vector<std::uint64_t> candidate_region_sizes;  // summed per depth
  std::uint64_t bound_check_total = 0;  // sum over components of sum |V_S|^d
  double wall_ms = 0;
  double first_result_ms = -1;

  void merge(const EngineStats& other);
  void write(std::ostream& out) const;  // key=value lines
};

// One column per query, rows time(ms), #Results, #OP_sp, #OP_ipj.
void write_stats_table(std::ostream& out, std::span<const std::string> names,
                       std::span<const EngineStats> stats);

struct MatchOrder {
  std::vector<std::uint32_t> sequence;
  // back_edges[k]: earlier positions sharing a TG^Q edge with position k.
  std::vector<std::vector<std::uint32_t>> back_edges;
};

MatchOrder make_match_order(const TransformedQueryGraph& tgq,
                            std::vector<std::uint32_t> sequence);
// Every sub-query of `component` exactly once; each position after the
// first shares a TG^Q edge with an earlier one.
bool is_valid_match_order(const TransformedQueryGraph& tgq,
                          std::span<const std::uint32_t> component,
                          const MatchOrder& order);
MatchOrder id_match_order(const TransformedQueryGraph& tgq,
                          std::span<const std::uint32_t> component);
MatchOrder random_match_order(const TransformedQueryGraph& tgq,
                              std::span<const std::uint32_t> component,
                              std::mt19937_64& rng);

// Per query vertex: all-ones for a variable without A-Patterns, a single
// bit for a known constant, zeros for an unknown constant, otherwise
// CandidateRLVertex over its A-Pattern group.
FilterContext get_candidate_rl_vertex_all(const SplitQuery& split,
                                          const Store& store,
                                          LookupCounter* counter = nullptr);

// Smaller is more selective: min over the sub-query's vertex masks of their
// set-bit counts and the dataset frequency of its predicates.
std::uint64_t subquery_selectivity(const SubQuery& sq, const FilterContext& ctx,
                                   const Store& store);

// The query vertex a sub-query's rows are sorted on, or
// BindingTable::kNotSorted.
std::uint32_t subquery_sort_vertex(const SubQuery& sq, std::uint32_t home);

// Heuristics: most selective start; then DFS preferring neighbours sorted
// on the start's sort vertex, then TypeII, then selectivity, then id.
MatchOrder determine_match_order(const TransformedQueryGraph& tgq,
                                 std::span<const std::uint32_t> component,
                                 std::span<const std::uint64_t> selectivity,
                                 std::span<const std::uint32_t> sort_vertex);

// Home vertex per sub-query, chosen so that as many TG^Q edges as possible
// join sub-queries whose homes are equal or joined by a query edge.
std::vector<std::uint32_t> choose_home_vertices(const TransformedQueryGraph& tgq,
                                                const QueryRlGraph& graph);

// Backtracking match of one TG^Q component over the summary graph. Returns
// all full bindings over the component's variable vertices.
BindingTable subgraph_match(const TransformedQueryGraph& tgq,
                            std::span<const std::uint32_t> component,
                            const MatchOrder& order, const Store& store,
                            const FilterContext& ctx,
                            std::span<const std::uint32_t> homes,
                            const EngineOptions& options, EngineStats& stats);

struct QueryResult {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;  // unique, sorted
  EngineStats stats;
  std::vector<std::string> warnings;
};

// Expands Pattern-II variables through RetrieveAttribute, checks attribute
// constraints on bound vertices, projects, decodes, and removes duplicates.
// `rows` binds every variable vertex of the query RL-graph.
QueryResult finalize_results(const BindingTable& rows, const SplitQuery& split,
                             const Query& query, const Store& store);

QueryResult execute(const Store& store, const Query& query,
                    const EngineOptions& options = {});

// Orders used by the last execute() of each component, for inspection.
struct ExecutionTrace {
  TransformedQueryGraph tgq;
  std::vector<MatchOrder> orders;
  std::vector<std::uint32_t> homes;
};
QueryResult execute_traced(const Store& store, const Query& query,
                           const EngineOptions& options, ExecutionTrace* trace);

}  // namespace sgdq
