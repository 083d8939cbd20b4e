#include "sgdq/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sgdq {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// sum_{i=1}^{m} base^i
std::uint64_t power_sum(std::uint64_t base, std::size_t m) {
  std::uint64_t total = 0, term = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    term = saturating_mul(term, base);
    total = saturating_add(total, term);
  }
  return total;
}

std::vector<std::uint32_t> variable_vertices(const TransformedQueryGraph& tgq,
                                             std::span<const std::uint32_t> component,
                                             const FilterContext& ctx) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i : component) {
    for (std::uint32_t v : tgq.subqueries[i].vertices) {
      if (ctx.vertices[v].is_variable) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void EngineStats::merge(const EngineStats& other) {
  op_sp_count += other.op_sp_count;
  op_ipj_count += other.op_ipj_count;
  memo_hits += other.memo_hits;
  pruned_partitions += other.pruned_partitions;
  matches += other.matches;
  results += other.results;
  if (candidate_region_sizes.size() < other.candidate_region_sizes.size()) {
    candidate_region_sizes.resize(other.candidate_region_sizes.size(), 0);
  }
  for (std::size_t i = 0; i < other.candidate_region_sizes.size(); ++i) {
    candidate_region_sizes[i] += other.candidate_region_sizes[i];
  }
  bound_check_total = saturating_add(bound_check_total, other.bound_check_total);
  if (other.first_result_ms >= 0 &&
      (first_result_ms < 0 || other.first_result_ms < first_result_ms)) {
    first_result_ms = other.first_result_ms;
  }
}

void EngineStats::write(std::ostream& out) const {
  out << "op_sp_count=" << op_sp_count << '\n'
      << "op_ipj_count=" << op_ipj_count << '\n'
      << "memo_hits=" << memo_hits << '\n'
      << "pruned_partitions=" << pruned_partitions << '\n'
      << "matches=" << matches << '\n'
      << "results=" << results << '\n'
      << "candidate_region_sizes=";
  for (std::size_t i = 0; i < candidate_region_sizes.size(); ++i) {
    if (i) out << ',';
    out << candidate_region_sizes[i];
  }
  out << '\n'
      << "op_sp_bound=" << bound_check_total << '\n'
      << "wall_ms=" << wall_ms << '\n'
      << "first_result_ms=" << first_result_ms << '\n';
}

void write_stats_table(std::ostream& out, std::span<const std::string> names,
                       std::span<const EngineStats> stats) {
  auto row = [&](const std::string& label, auto&& cell) {
    out << "| " << label;
    for (std::size_t i = 0; i < stats.size(); ++i) out << " | " << cell(i);
    out << " |\n";
  };
  row("", [&](std::size_t i) { return names[i]; });
  row("time(ms)", [&](std::size_t i) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << stats[i].wall_ms;
    return s.str();
  });
  row("#Results", [&](std::size_t i) { return std::to_string(stats[i].results); });
  row("#OP_sp", [&](std::size_t i) { return std::to_string(stats[i].op_sp_count); });
  row("#OP_ipj", [&](std::size_t i) { return std::to_string(stats[i].op_ipj_count); });
}

MatchOrder make_match_order(const TransformedQueryGraph& tgq,
                            std::vector<std::uint32_t> sequence) {
  MatchOrder order;
  order.back_edges.resize(sequence.size());
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (tgq.adjacent(sequence[j], sequence[k])) {
        order.back_edges[k].push_back(static_cast<std::uint32_t>(j));
      }
    }
  }
  order.sequence = std::move(sequence);
  return order;
}

bool is_valid_match_order(const TransformedQueryGraph& tgq,
                          std::span<const std::uint32_t> component,
                          const MatchOrder& order) {
  if (order.sequence.size() != component.size()) return false;
  std::vector<std::uint32_t> a(order.sequence), b(component.begin(), component.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end()) return false;
  for (std::size_t k = 1; k < order.sequence.size(); ++k) {
    bool linked = false;
    for (std::size_t j = 0; j < k && !linked; ++j) {
      linked = tgq.adjacent(order.sequence[j], order.sequence[k]);
    }
    if (!linked) return false;
  }
  return true;
}

namespace {

// Grows an order from `start`, each step choosing among the unplaced
// sub-queries adjacent to a placed one.
template <typename Choose>
MatchOrder grow_order(const TransformedQueryGraph& tgq,
                      std::span<const std::uint32_t> component, std::uint32_t start,
                      Choose&& choose) {
  std::vector<std::uint32_t> sequence{start};
  std::vector<char> placed(tgq.size(), 0);
  placed[start] = 1;
  while (sequence.size() < component.size()) {
    std::vector<std::uint32_t> frontier;
    for (std::uint32_t i : component) {
      if (placed[i]) continue;
      for (std::uint32_t j : tgq.adjacency[i]) {
        if (placed[j]) {
          frontier.push_back(i);
          break;
        }
      }
    }
    if (frontier.empty()) throw std::logic_error("TG^Q component is not connected");
    std::uint32_t next = choose(frontier, sequence);
    placed[next] = 1;
    sequence.push_back(next);
  }
  return make_match_order(tgq, std::move(sequence));
}

}  // namespace

MatchOrder id_match_order(const TransformedQueryGraph& tgq,
                          std::span<const std::uint32_t> component) {
  std::uint32_t start = *std::min_element(component.begin(), component.end());
  return grow_order(tgq, component, start, [](const auto& frontier, const auto&) {
    return *std::min_element(frontier.begin(), frontier.end());
  });
}

MatchOrder random_match_order(const TransformedQueryGraph& tgq,
                              std::span<const std::uint32_t> component,
                              std::mt19937_64& rng) {
  std::uint32_t start = component[rng() % component.size()];
  return grow_order(tgq, component, start, [&](const auto& frontier, const auto&) {
    return frontier[rng() % frontier.size()];
  });
}

MatchOrder determine_match_order(const TransformedQueryGraph& tgq,
                                 std::span<const std::uint32_t> component,
                                 std::span<const std::uint64_t> selectivity,
                                 std::span<const std::uint32_t> sort_vertex) {
  std::uint32_t start = component.front();
  for (std::uint32_t i : component) {
    if (selectivity[i] < selectivity[start] ||
        (selectivity[i] == selectivity[start] && i < start)) {
      start = i;
    }
  }
  const std::uint32_t sorted = sort_vertex[start];
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    const bool ma = sorted != BindingTable::kNotSorted && sort_vertex[a] == sorted;
    const bool mb = sorted != BindingTable::kNotSorted && sort_vertex[b] == sorted;
    if (ma != mb) return ma;
    const bool ta = tgq.subqueries[a].kind == SubQueryKind::TypeII;
    const bool tb = tgq.subqueries[b].kind == SubQueryKind::TypeII;
    if (ta != tb) return ta;
    if (selectivity[a] != selectivity[b]) return selectivity[a] < selectivity[b];
    return a < b;
  };
  return grow_order(tgq, component, start, [&](const auto& frontier, const auto& sequence) {
    // Depth first: neighbours of the most recently placed sub-query that
    // still has unplaced neighbours.
    for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
      std::optional<std::uint32_t> best;
      for (std::uint32_t c : frontier) {
        if (!tgq.adjacent(*it, c)) continue;
        if (!best || better(c, *best)) best = c;
      }
      if (best) return *best;
    }
    return frontier.front();
  });
}

FilterContext get_candidate_rl_vertex_all(const SplitQuery& split, const Store& store,
                                          LookupCounter* counter) {
  FilterContext ctx;
  const std::uint32_t size = store.dict_r.size();
  for (std::uint32_t v = 0; v < split.graph.vertices.size(); ++v) {
    const QueryVertex& qv = split.graph.vertices[v];
    const APatternGroup& group = split.a_groups[v];
    FilterContext::Entry e;
    e.is_variable = qv.is_variable();
    if (e.is_variable) {
      if (group.patterns.empty()) {
        e.mask = DenseBits(size, true);
      } else {
        e.mask = DenseBits(candidate_rl_vertex(group, store.a_indexes, store.predicates,
                                               store.dict_a, counter));
      }
    } else {
      e.mask = DenseBits(size, false);
      e.constant = store.dict_r.find(std::get<Term>(qv.term));
      if (e.constant) {
        bool ok = true;
        if (!group.patterns.empty()) {
          ok = candidate_rl_vertex(group, store.a_indexes, store.predicates, store.dict_a,
                                   counter)
                   .test(*e.constant - 1);
        }
        if (ok) e.mask.set(*e.constant - 1);
      }
    }
    e.popcount = e.mask.count();
    ctx.vertices.push_back(std::move(e));
  }
  return ctx;
}

std::uint64_t subquery_selectivity(const SubQuery& sq, const FilterContext& ctx,
                                   const Store& store) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint32_t v : sq.vertices) {
    best = std::min<std::uint64_t>(best, ctx.vertices[v].popcount);
  }
  for (const RPattern& p : sq.patterns) {
    std::uint64_t f = p.predicate_id && *p.predicate_id < store.predicate_frequency.size()
                          ? store.predicate_frequency[*p.predicate_id]
                          : 0;
    best = std::min(best, f);
  }
  return best;
}

std::uint32_t subquery_sort_vertex(const SubQuery& sq, std::uint32_t home) {
  if (sq.kind != SubQueryKind::TypeI || sq.patterns.size() != 1) {
    return BindingTable::kNotSorted;
  }
  // Mirrors the scan chosen by Op_sp for a single pattern.
  const RPattern& p = sq.patterns.front();
  if (p.s == p.o) return p.s;
  return home == p.o ? p.o : p.s;
}

std::vector<std::uint32_t> choose_home_vertices(const TransformedQueryGraph& tgq,
                                                const QueryRlGraph& graph) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> linked;
  for (const RPattern& e : graph.edges) {
    linked.insert({e.s, e.o});
    linked.insert({e.o, e.s});
  }
  auto covered = [&](std::uint32_t a, std::uint32_t b) {
    return a == b || linked.count({a, b}) > 0;
  };
  const std::size_t m = tgq.size();
  std::vector<std::uint32_t> homes(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const SubQuery& sq = tgq.subqueries[i];
    std::size_t best_score = 0;
    homes[i] = sq.vertices.front();
    for (std::uint32_t v : sq.vertices) {
      std::size_t score = 0;
      for (std::uint32_t j : tgq.adjacency[i]) {
        const auto& vs = tgq.subqueries[j].vertices;
        score += std::binary_search(vs.begin(), vs.end(), v);
      }
      if (score > best_score) {
        best_score = score;
        homes[i] = v;
      }
    }
  }
  auto score_of = [&](std::size_t i, std::uint32_t v) {
    std::size_t score = 0;
    for (std::uint32_t j : tgq.adjacency[i]) {
      if (j != i) score += covered(v, homes[j]);
    }
    return score;
  };
  for (int round = 0; round < 16; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t current = score_of(i, homes[i]);
      for (std::uint32_t v : tgq.subqueries[i].vertices) {
        std::size_t s = score_of(i, v);
        if (s > current) {
          current = s;
          homes[i] = v;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return homes;
}

namespace {

enum class Link : std::uint8_t { None, Same, Adjacent };

using TablePtr = std::shared_ptr<const BindingTable>;

// State of one backtracking run over a fixed match order.
class Matcher {
 public:
  Matcher(const TransformedQueryGraph& tgq, const MatchOrder& order, const Store& store,
          const FilterContext& ctx, std::span<const std::uint32_t> homes,
          const EngineOptions& options, Clock::time_point start)
      : tgq_(tgq), order_(order), store_(store), ctx_(ctx), homes_(homes),
        options_(options), start_(start) {
    const std::size_t depth = order.sequence.size();
    const std::uint32_t n = static_cast<std::uint32_t>(store.partitions.size());
    allowed_.assign(depth, std::vector<char>(n, 0));
    memo_.assign(depth, std::vector<TablePtr>(n));
    links_.resize(depth);
    stack_.resize(depth);
    assignment_.assign(depth, 0);
    stats.candidate_region_sizes.assign(depth, 0);
    for (std::size_t k = 0; k < depth; ++k) {
      const SubQuery& sq = tgq.subqueries[order.sequence[k]];
      std::vector<std::optional<PredicateId>> required;
      for (const RPattern& p : sq.patterns) required.push_back(p.predicate_id);
      BitVector labels = store.summary.label_subset_candidates(required);
      for (std::uint32_t v = 0; v < n; ++v) {
        allowed_[k][v] = labels.test(v) && region_has_candidates(sq, store.partitions[v]);
      }
      for (std::uint32_t b : order.back_edges[k]) {
        links_[k].push_back(link_between(b, k));
      }
    }
  }

  EngineStats stats;
  BindingTable out;
  bool has_out = false;

  std::vector<std::uint32_t> candidates(std::size_t k) const {
    std::vector<std::uint32_t> result;
    for (std::uint32_t v = 0; v < allowed_[k].size(); ++v) {
      if (!allowed_[k][v]) continue;
      bool ok = true;
      if (options_.summary_pruning) {
        for (std::size_t i = 0; i < links_[k].size() && ok; ++i) {
          std::uint32_t prev = assignment_[order_.back_edges[k][i]];
          switch (links_[k][i]) {
            case Link::Same: ok = prev == v; break;
            case Link::Adjacent: ok = store_.summary.adjacent_or_self(prev, v); break;
            case Link::None: break;
          }
        }
      }
      if (ok) result.push_back(v);
    }
    return result;
  }

  // Runs depth `k` for one partition choice, recursing below it.
  void step(std::size_t k, std::uint32_t v) {
    TablePtr r = op_sp_at(k, v);
    if (r->empty()) {
      if (options_.prune_empty && allowed_[k][v]) {
        allowed_[k][v] = 0;
        ++stats.pruned_partitions;
      }
      return;
    }
    TablePtr current = r;
    if (k > 0) {
      ++stats.op_ipj_count;
      current = std::make_shared<const BindingTable>(op_ipj(*stack_[k - 1], *r));
      if (current->empty()) return;
    }
    assignment_[k] = v;
    if (k + 1 == order_.sequence.size()) {
      emit(*current);
      return;
    }
    stack_[k] = current;
    run(k + 1);
    stack_[k].reset();
  }

  void run(std::size_t k) {
    std::vector<std::uint32_t> region = candidates(k);
    stats.candidate_region_sizes[k] += region.size();
    for (std::uint32_t v : region) step(k, v);
  }

 private:
  Link link_between(std::uint32_t earlier, std::size_t k) const {
    if (options_.verify == VerifyPolicy::LastOnly) return Link::Adjacent;
    std::uint32_t a = homes_[order_.sequence[earlier]];
    std::uint32_t b = homes_[order_.sequence[k]];
    if (a == b) return Link::Same;
    for (const SubQuery& sq : tgq_.subqueries) {
      for (const RPattern& p : sq.patterns) {
        if ((p.s == a && p.o == b) || (p.s == b && p.o == a)) return Link::Adjacent;
      }
    }
    return Link::None;
  }

  // Necessary condition from the candidate masks: under the anchored rule
  // the home vertex needs a candidate inside the original range, otherwise
  // every vertex needs a candidate inside the expanded partition.
  bool region_has_candidates(const SubQuery& sq, const PartitionStore& part) const {
    if (options_.verify == VerifyPolicy::Anchored) {
      const auto& e = ctx_.vertices[homes_[sq.id]];
      const VertexRange range = part.original_range();
      return range.size() > 0 && e.mask.count_range(range.first - 1, range.last - 1) > 0;
    }
    for (std::uint32_t q : sq.vertices) {
      const auto& e = ctx_.vertices[q];
      bool found = false;
      if (e.popcount == e.mask.size()) {
        found = part.p_vector().count() > 0;
      } else {
        part.p_vector().for_each_one([&](std::uint32_t pos) {
          if (!found && e.mask.test(pos)) found = true;
        });
      }
      if (!found) return false;
    }
    return true;
  }

  VerifySpec verify_for(std::size_t k) const {
    const SubQuery& sq = tgq_.subqueries[order_.sequence[k]];
    if (options_.verify == VerifyPolicy::Anchored) {
      return {VerifyMode::Anchor, homes_[sq.id]};
    }
    if (k + 1 != order_.sequence.size()) return {VerifyMode::None, 0};
    return {sq.kind == SubQueryKind::TypeI ? VerifyMode::SubjectInRange : VerifyMode::Quorum,
            0};
  }

  TablePtr op_sp_at(std::size_t k, std::uint32_t v) {
    if (options_.memoize && memo_[k][v]) {
      ++stats.memo_hits;
      return memo_[k][v];
    }
    ++stats.op_sp_count;
    const SubQuery& sq = tgq_.subqueries[order_.sequence[k]];
    auto table = std::make_shared<const BindingTable>(
        op_sp(sq, store_.partitions[v], ctx_, verify_for(k)));
    if (options_.memoize) memo_[k][v] = table;
    return table;
  }

  void emit(const BindingTable& rows) {
    if (stats.first_result_ms < 0) stats.first_result_ms = ms_since(start_);
    stats.matches += rows.rows();
    if (!has_out) {
      out = BindingTable(rows.schema());
      has_out = true;
    }
    for (std::size_t r = 0; r < rows.rows(); ++r) out.add_row(rows.row(r));
  }

  const TransformedQueryGraph& tgq_;
  const MatchOrder& order_;
  const Store& store_;
  const FilterContext& ctx_;
  std::span<const std::uint32_t> homes_;
  const EngineOptions& options_;
  Clock::time_point start_;
  std::vector<std::vector<char>> allowed_;
  std::vector<std::vector<TablePtr>> memo_;
  std::vector<std::vector<Link>> links_;
  std::vector<TablePtr> stack_;
  std::vector<std::uint32_t> assignment_;
};

// Reorders the columns of `t` to `schema`.
BindingTable reorder(const BindingTable& t, const std::vector<std::uint32_t>& schema) {
  if (t.schema() == schema) return t;
  BindingTable out(schema);
  std::vector<std::size_t> cols;
  for (std::uint32_t v : schema) cols.push_back(*t.column_of(v));
  std::vector<VertexId> buffer(schema.size());
  out.reserve(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) buffer[c] = t.at(r, cols[c]);
    out.add_row(buffer);
  }
  return out;
}

void debug_check(const BindingTable& rows, const TransformedQueryGraph& tgq,
                 std::span<const std::uint32_t> component, const Store& store,
                 const FilterContext& ctx) {
  const Dataset& dataset = store.dataset();
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    auto value = [&](std::uint32_t q) {
      if (auto c = rows.column_of(q)) return store.dict_r.term(rows.at(r, *c));
      return store.dict_r.term(*ctx.vertices[q].constant);
    };
    for (std::uint32_t i : component) {
      for (const RPattern& p : tgq.subqueries[i].patterns) {
        Triple t{value(p.s), p.predicate, value(p.o)};
        if (!std::binary_search(dataset.triples.begin(), dataset.triples.end(), t)) {
          throw std::logic_error("match row violates pattern " +
                                 std::to_string(p.text_index + 1));
        }
      }
    }
  }
  BindingTable copy = rows;
  sort_unique(copy);
  if (copy.rows() != rows.rows()) throw std::logic_error("duplicate match rows");
}

}  // namespace

BindingTable subgraph_match(const TransformedQueryGraph& tgq,
                            std::span<const std::uint32_t> component,
                            const MatchOrder& order, const Store& store,
                            const FilterContext& ctx, std::span<const std::uint32_t> homes,
                            const EngineOptions& options, EngineStats& stats) {
  const auto start = Clock::now();
  const std::vector<std::uint32_t> schema = variable_vertices(tgq, component, ctx);
  BindingTable result(schema);
  if (order.sequence.empty()) return result;

  Matcher root(tgq, order, store, ctx, homes, options, start);
  std::vector<std::uint32_t> top = root.candidates(0);
  root.stats.candidate_region_sizes[0] += top.size();

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.parallel, static_cast<unsigned>(top.size())));
  std::vector<BindingTable> pieces;
  EngineStats merged = root.stats;
  if (workers <= 1) {
    for (std::uint32_t v : top) root.step(0, v);
    merged = root.stats;
    if (root.has_out) pieces.push_back(std::move(root.out));
  } else {
    std::vector<BindingTable> per_candidate(top.size());
    std::vector<char> filled(top.size(), 0);
    std::vector<EngineStats> worker_stats(workers);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        Matcher m(tgq, order, store, ctx, homes, options, start);
        for (std::size_t i = next++; i < top.size(); i = next++) {
          m.has_out = false;
          m.out = BindingTable();
          m.step(0, top[i]);
          if (m.has_out) {
            per_candidate[i] = std::move(m.out);
            filled[i] = 1;
          }
        }
        worker_stats[w] = m.stats;
      });
    }
    for (auto& t : threads) t.join();
    for (auto& s : worker_stats) {
      s.candidate_region_sizes[0] = 0;
      merged.merge(s);
    }
    for (std::size_t i = 0; i < top.size(); ++i) {
      if (filled[i]) pieces.push_back(std::move(per_candidate[i]));
    }
  }

  for (const BindingTable& piece : pieces) {
    BindingTable ordered = reorder(piece, schema);
    for (std::size_t r = 0; r < ordered.rows(); ++r) result.add_row(ordered.row(r));
  }
  if (options.debug) debug_check(result, tgq, component, store, ctx);

  if (stats.candidate_region_sizes.size() < merged.candidate_region_sizes.size()) {
    stats.candidate_region_sizes.resize(merged.candidate_region_sizes.size(), 0);
  }
  for (std::size_t i = 0; i < merged.candidate_region_sizes.size(); ++i) {
    stats.candidate_region_sizes[i] += merged.candidate_region_sizes[i];
  }
  merged.candidate_region_sizes.clear();
  stats.merge(merged);
  return result;
}

QueryResult finalize_results(const BindingTable& rows, const SplitQuery& split,
                             const Query& query, const Store& store) {
  QueryResult result;
  result.columns = query.projection();
  if (rows.rows() == 0) return result;
  const auto& vertices = split.graph.vertices;

  std::map<std::string, std::size_t> slot_of;
  auto slot = [&](const std::string& name) {
    auto [it, inserted] = slot_of.emplace(name, slot_of.size());
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> vertex_slots;  // column, slot
  for (std::size_t c = 0; c < rows.width(); ++c) {
    const QueryVertex& qv = vertices.at(rows.schema()[c]);
    vertex_slots.push_back({c, slot(variable_name(qv.term))});
  }
  struct Expansion {
    const AttributePattern* pattern;
    std::optional<std::size_t> subject_column;
    VertexId subject_constant = 0;
    std::size_t object_slot;
  };
  std::vector<Expansion> expansions;
  for (const AttributePattern& a : split.a_patterns) {
    if (!is_variable(a.object) || !a.predicate_id) continue;
    Expansion e{&a, rows.column_of(a.subject), 0, slot(variable_name(a.object))};
    if (!e.subject_column) {
      auto id = store.dict_r.find(std::get<Term>(vertices[a.subject].term));
      if (!id) return result;
      e.subject_constant = *id;
    }
    expansions.push_back(e);
  }
  std::vector<std::optional<std::size_t>> projected;
  for (const std::string& name : result.columns) {
    auto it = slot_of.find(name);
    projected.push_back(it == slot_of.end() ? std::nullopt
                                            : std::optional<std::size_t>(it->second));
  }

  std::set<std::vector<Term>> unique;
  std::vector<std::optional<Term>> values(slot_of.size());
  std::vector<Term> out_row(result.columns.size());
  std::function<void(std::size_t, std::size_t)> expand = [&](std::size_t r, std::size_t k) {
    if (k == expansions.size()) {
      for (std::size_t c = 0; c < projected.size(); ++c) {
        out_row[c] = projected[c] && values[*projected[c]] ? *values[*projected[c]] : Term{};
      }
      unique.insert(out_row);
      return;
    }
    const Expansion& e = expansions[k];
    VertexId subject = e.subject_column ? rows.at(r, *e.subject_column) : e.subject_constant;
    std::vector<Term> found = retrieve_attribute(subject, *e.pattern->predicate_id,
                                                 store.a_indexes, store.dict_a);
    std::optional<Term>& target = values[e.object_slot];
    if (target) {
      if (std::find(found.begin(), found.end(), *target) != found.end()) expand(r, k + 1);
      return;
    }
    for (Term& t : found) {
      target = std::move(t);
      expand(r, k + 1);
    }
    target.reset();
  };
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    std::fill(values.begin(), values.end(), std::nullopt);
    for (auto [c, s] : vertex_slots) values[s] = store.dict_r.term(rows.at(r, c));
    expand(r, 0);
  }
  result.rows.assign(unique.begin(), unique.end());
  result.stats.results = result.rows.size();
  return result;
}

QueryResult execute_traced(const Store& store, const Query& query,
                           const EngineOptions& options, ExecutionTrace* trace) {
  const auto t0 = Clock::now();
  SplitQuery split = split_query(query, store.predicates);
  EngineStats stats;
  auto finish = [&](QueryResult result) {
    stats.results = result.rows.size();
    stats.wall_ms = ms_since(t0);
    result.stats = stats;
    result.warnings.insert(result.warnings.begin(), split.warnings.begin(),
                           split.warnings.end());
    return result;
  };
  auto empty_result = [&] {
    QueryResult r;
    r.columns = query.projection();
    return finish(std::move(r));
  };
  if (split.known_empty) return empty_result();

  FilterContext ctx = get_candidate_rl_vertex_all(split, store);
  for (const auto& e : ctx.vertices) {
    if (e.popcount == 0) return empty_result();
  }

  TransformedQueryGraph tgq = decompose(split.graph);
  std::vector<std::uint32_t> homes = choose_home_vertices(tgq, split.graph);
  std::vector<std::uint64_t> selectivity(tgq.size());
  std::vector<std::uint32_t> sort_vertex(tgq.size());
  for (std::size_t i = 0; i < tgq.size(); ++i) {
    selectivity[i] = subquery_selectivity(tgq.subqueries[i], ctx, store);
    sort_vertex[i] = subquery_sort_vertex(tgq.subqueries[i], homes[i]);
  }
  std::mt19937_64 rng(options.order_seed);
  if (trace) {
    trace->orders.clear();
    trace->homes = homes;
  }

  BindingTable all = BindingTable::unit();
  for (const auto& component : tgq.components()) {
    MatchOrder order;
    switch (options.order) {
      case OrderPolicy::Auto:
        order = determine_match_order(tgq, component, selectivity, sort_vertex);
        break;
      case OrderPolicy::Id: order = id_match_order(tgq, component); break;
      case OrderPolicy::Random: order = random_match_order(tgq, component, rng); break;
    }
    if (trace) trace->orders.push_back(order);
    stats.bound_check_total = saturating_add(
        stats.bound_check_total, power_sum(store.partitions.size(), component.size()));
    const double before = ms_since(t0);
    EngineStats local;
    BindingTable t = subgraph_match(tgq, component, order, store, ctx, homes, options, local);
    if (local.first_result_ms >= 0) local.first_result_ms += before;
    stats.merge(local);
    if (t.empty()) {
      all = BindingTable();
      break;
    }
    all = op_ipj(all, t);
  }
  for (std::uint32_t v = split.graph.rl_vertex_count;
       v < split.graph.vertices.size() && !all.empty(); ++v) {
    if (!ctx.vertices[v].is_variable) continue;
    BindingTable t({v});
    for (std::uint32_t pos = 0; pos < ctx.vertices[v].mask.size(); ++pos) {
      if (ctx.vertices[v].mask.test(pos)) {
        VertexId id = pos + 1;
        t.add_row({&id, 1});
      }
    }
    all = op_ipj(all, t);
  }
  if (trace) trace->tgq = std::move(tgq);
  return finish(finalize_results(all, split, query, store));
}

QueryResult execute(const Store& store, const Query& query, const EngineOptions& options) {
  return execute_traced(store, query, options, nullptr);
}

}  // namespace sgdq
