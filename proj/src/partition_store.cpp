#include "sgdq/partition_store.hpp"

#include <algorithm>
#include <numeric>

#include "sgdq/error.hpp"

namespace sgdq {

const char* ordering_name(Ordering ordering) {
  switch (ordering) {
    case Ordering::SPO: return "spo";
    case Ordering::SOP: return "sop";
    case Ordering::PSO: return "pso";
    case Ordering::POS: return "pos";
    case Ordering::OSP: return "osp";
    case Ordering::OPS: return "ops";
  }
  return "?";
}

Key3 permute(Ordering ordering, const IdTriple& t) {
  switch (ordering) {
    case Ordering::SPO: return {t.s, t.p, t.o};
    case Ordering::SOP: return {t.s, t.o, t.p};
    case Ordering::PSO: return {t.p, t.s, t.o};
    case Ordering::POS: return {t.p, t.o, t.s};
    case Ordering::OSP: return {t.o, t.s, t.p};
    case Ordering::OPS: return {t.o, t.p, t.s};
  }
  return {};
}

IdTriple unpermute(Ordering ordering, const Key3& k) {
  switch (ordering) {
    case Ordering::SPO: return {k.a, k.b, k.c};
    case Ordering::SOP: return {k.a, k.c, k.b};
    case Ordering::PSO: return {k.b, k.a, k.c};
    case Ordering::POS: return {k.c, k.a, k.b};
    case Ordering::OSP: return {k.b, k.c, k.a};
    case Ordering::OPS: return {k.c, k.b, k.a};
  }
  return {};
}

PermutationIndexSet::PermutationIndexSet(std::vector<IdTriple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  for (Ordering o : kAllOrderings) {
    auto& index = indexes_[static_cast<int>(o)];
    index.reserve(triples.size());
    for (const IdTriple& t : triples) index.push_back(permute(o, t));
    std::sort(index.begin(), index.end());
  }
}

PermutationIndexSet PermutationIndexSet::from_arrays(
    std::array<std::vector<Key3>, 6> arrays) {
  for (const auto& a : arrays) {
    if (a.size() != arrays[0].size()) {
      throw StoreCorruptError("permutation indexes differ in size");
    }
    if (!std::is_sorted(a.begin(), a.end()) ||
        std::adjacent_find(a.begin(), a.end()) != a.end()) {
      throw StoreCorruptError("permutation index is not strictly sorted");
    }
  }
  PermutationIndexSet set;
  set.indexes_ = std::move(arrays);
  return set;
}

std::span<const Key3> PermutationIndexSet::scan(
    Ordering ordering, std::span<const std::uint32_t> prefix) const {
  const auto& index = this->index(ordering);
  const std::size_t k = prefix.size();
  auto cmp_key = [&](const Key3& key) {
    std::uint32_t parts[3] = {key.a, key.b, key.c};
    for (std::size_t i = 0; i < k; ++i) {
      if (parts[i] != prefix[i]) return parts[i] < prefix[i] ? -1 : 1;
    }
    return 0;
  };
  auto lo = std::partition_point(index.begin(), index.end(),
                                 [&](const Key3& key) { return cmp_key(key) < 0; });
  auto hi = std::partition_point(lo, index.end(),
                                 [&](const Key3& key) { return cmp_key(key) == 0; });
  return {lo, hi};
}

PartitionStore::PartitionStore(std::uint32_t id, VertexRange original_range,
                               BitVector p_vector, PermutationIndexSet indexes,
                               std::uint32_t predicate_count)
    : id_(id),
      range_(original_range),
      p_vector_(std::move(p_vector)),
      p_dense_(p_vector_),
      indexes_(std::move(indexes)),
      frequency_(predicate_count, 0) {
  for (const Key3& k : indexes_.index(Ordering::PSO)) {
    if (k.a >= frequency_.size()) frequency_.resize(k.a + 1, 0);
    ++frequency_[k.a];
  }
}

std::vector<PredicateId> PartitionStore::labels() const {
  std::vector<PredicateId> out;
  for (PredicateId p = 0; p < frequency_.size(); ++p) {
    if (frequency_[p] > 0) out.push_back(p);
  }
  return out;
}

PartitionStore build_partition_store(const ExpandedPartition& partition,
                                     const RlGraph& graph,
                                     std::uint32_t predicate_count) {
  std::vector<IdTriple> triples;
  triples.reserve(partition.edges.size());
  for (std::uint32_t e : partition.edges) {
    const RlEdge& edge = graph.edges()[e];
    triples.push_back({edge.from + 1, edge.predicate, edge.to + 1});
  }
  return PartitionStore(partition.id, partition.original_range, partition.p_vector,
                        PermutationIndexSet(std::move(triples)), predicate_count);
}

namespace {

constexpr std::uint32_t kNoVertex = UINT32_MAX;

struct ScanContext {
  const PartitionStore& part;
  const FilterContext& ctx;
  std::uint32_t restrict_vertex = kNoVertex;  // must lie in original_range

  bool admits(std::uint32_t q, VertexId v) const {
    if (!ctx.admits(q, v) || !part.contains_vertex(v)) return false;
    return q != restrict_vertex || part.original_range().contains(v);
  }
};

// Bound value of an endpoint: constant id, or nullopt for a variable.
// Returns false when the endpoint can never match.
bool constant_value(const FilterContext& ctx, const ScanContext& sc,
                    std::uint32_t q, std::optional<VertexId>& value) {
  const auto& e = ctx.vertices[q];
  if (e.is_variable) {
    value.reset();
    return true;
  }
  if (!e.constant) return false;
  value = e.constant;
  return sc.admits(q, *e.constant);
}

std::vector<std::uint32_t> pattern_schema(const RPattern& p, const FilterContext& ctx) {
  std::vector<std::uint32_t> schema;
  if (ctx.vertices[p.s].is_variable) schema.push_back(p.s);
  if (ctx.vertices[p.o].is_variable && p.o != p.s) schema.push_back(p.o);
  std::sort(schema.begin(), schema.end());
  return schema;
}

// Rows of one pattern over its variable endpoints.
BindingTable scan_pattern(const RPattern& pattern, const ScanContext& sc) {
  const FilterContext& ctx = sc.ctx;
  BindingTable out(pattern_schema(pattern, ctx));
  if (!pattern.predicate_id) return out;
  const PredicateId p = *pattern.predicate_id;
  std::optional<VertexId> s_const, o_const;
  if (!constant_value(ctx, sc, pattern.s, s_const) ||
      !constant_value(ctx, sc, pattern.o, o_const)) {
    return out;
  }
  const auto& indexes = sc.part.indexes();
  const VertexRange range = sc.part.original_range();
  const bool loop = pattern.s == pattern.o;
  const bool s_first = out.width() == 2 && out.schema()[0] == pattern.s;

  auto add = [&](VertexId s, VertexId o) {
    if (loop && s != o) return;
    if (!s_const && !sc.admits(pattern.s, s)) return;
    if (!o_const && !sc.admits(pattern.o, o)) return;
    VertexId row[2];
    if (out.width() == 0) {
      out.add_row(std::span<const VertexId>{});
    } else if (out.width() == 1) {
      row[0] = s_const ? o : s;
      out.add_row({row, 1});
    } else {
      row[0] = s_first ? s : o;
      row[1] = s_first ? o : s;
      out.add_row({row, 2});
    }
  };

  if (s_const && o_const) {
    std::uint32_t prefix[3] = {*s_const, p, *o_const};
    if (!indexes.scan(Ordering::SPO, prefix).empty()) add(*s_const, *o_const);
  } else if (s_const) {
    std::uint32_t prefix[2] = {*s_const, p};
    for (const Key3& k : indexes.scan(Ordering::SPO, prefix)) add(*s_const, k.c);
    out.set_sorted_on(pattern.o);
  } else if (o_const) {
    std::uint32_t prefix[2] = {*o_const, p};
    for (const Key3& k : indexes.scan(Ordering::OPS, prefix)) add(k.c, *o_const);
    out.set_sorted_on(pattern.s);
  } else if (sc.restrict_vertex == pattern.o && !loop) {
    std::uint32_t prefix[1] = {p};
    auto rows = indexes.scan(Ordering::POS, prefix);
    auto lo = std::partition_point(rows.begin(), rows.end(),
                                   [&](const Key3& k) { return k.b < range.first; });
    for (auto it = lo; it != rows.end() && it->b <= range.last; ++it) add(it->c, it->b);
    out.set_sorted_on(pattern.o);
  } else {
    std::uint32_t prefix[1] = {p};
    auto rows = indexes.scan(Ordering::PSO, prefix);
    auto lo = rows.begin();
    if (sc.restrict_vertex == pattern.s) {
      lo = std::partition_point(rows.begin(), rows.end(),
                                [&](const Key3& k) { return k.b < range.first; });
    }
    for (auto it = lo; it != rows.end(); ++it) {
      if (sc.restrict_vertex == pattern.s && it->b > range.last) break;
      add(it->b, it->c);
    }
    out.set_sorted_on(pattern.s);
  }
  return out;
}

// Extends every row of `current` through index lookups on `pattern`, which
// must have at least one endpoint bound by `current` or by a constant.
BindingTable bind_join(const BindingTable& current, const RPattern& pattern,
                       const ScanContext& sc) {
  const FilterContext& ctx = sc.ctx;
  std::vector<std::uint32_t> schema = current.schema();
  auto s_col = current.column_of(pattern.s);
  auto o_col = current.column_of(pattern.o);
  std::optional<VertexId> s_const, o_const;
  if (!pattern.predicate_id || !constant_value(ctx, sc, pattern.s, s_const) ||
      !constant_value(ctx, sc, pattern.o, o_const)) {
    for (std::uint32_t v : pattern_schema(pattern, ctx)) {
      if (!current.column_of(v)) schema.push_back(v);
    }
    return BindingTable(schema);
  }
  const bool new_s = !s_col && !s_const;
  const bool new_o = !o_col && !o_const && pattern.o != pattern.s;
  if (new_s) schema.push_back(pattern.s);
  if (new_o) schema.push_back(pattern.o);
  BindingTable out(schema);
  out.set_sorted_on(current.sorted_on());
  const PredicateId p = *pattern.predicate_id;
  const auto& indexes = sc.part.indexes();
  std::vector<VertexId> buffer;
  for (std::size_t r = 0; r < current.rows(); ++r) {
    auto row = current.row(r);
    std::optional<VertexId> s = s_col ? std::optional<VertexId>(row[*s_col]) : s_const;
    std::optional<VertexId> o = o_col ? std::optional<VertexId>(row[*o_col]) : o_const;
    if (pattern.o == pattern.s && s) o = s;
    buffer.assign(row.begin(), row.end());
    if (s && o) {
      std::uint32_t prefix[3] = {*s, p, *o};
      if (!indexes.scan(Ordering::SPO, prefix).empty()) out.add_row(buffer);
    } else if (s) {
      std::uint32_t prefix[2] = {*s, p};
      for (const Key3& k : indexes.scan(Ordering::SPO, prefix)) {
        if (!sc.admits(pattern.o, k.c)) continue;
        buffer.resize(row.size());
        buffer.push_back(k.c);
        out.add_row(buffer);
      }
    } else if (o) {
      std::uint32_t prefix[2] = {*o, p};
      for (const Key3& k : indexes.scan(Ordering::OPS, prefix)) {
        if (!sc.admits(pattern.s, k.c)) continue;
        buffer.resize(row.size());
        buffer.push_back(k.c);
        out.add_row(buffer);
      }
    }
  }
  return out;
}

bool shares_variable(const BindingTable& t, const RPattern& p) {
  return t.column_of(p.s).has_value() || t.column_of(p.o).has_value();
}

std::uint32_t restrict_vertex_for(const VerifySpec& verify, const SubQuery& sq,
                                  const FilterContext& ctx) {
  if (verify.mode == VerifyMode::Anchor) return verify.anchor;
  if (verify.mode == VerifyMode::SubjectInRange && !sq.patterns.empty()) {
    return sq.patterns.front().s;
  }
  (void)ctx;
  return kNoVertex;
}

// Constant restricted vertices are checked once up front.
bool restricted_constant_ok(std::uint32_t q, const PartitionStore& part,
                            const FilterContext& ctx) {
  if (q == kNoVertex || ctx.vertices[q].is_variable) return true;
  const auto& c = ctx.vertices[q].constant;
  return c && part.original_range().contains(*c);
}

void apply_quorum(BindingTable& table, const PartitionStore& part) {
  const std::size_t k = table.width();
  if (k <= 1) return;
  BindingTable kept(table.schema());
  kept.set_sorted_on(table.sorted_on());
  const VertexRange range = part.original_range();
  for (std::size_t r = 0; r < table.rows(); ++r) {
    std::size_t inside = 0;
    for (VertexId v : table.row(r)) inside += range.contains(v);
    if (inside + 1 >= k) kept.add_row(table.row(r));
  }
  table = std::move(kept);
}

}  // namespace

std::uint64_t pattern_estimate(const RPattern& pattern, const PartitionStore& part,
                               const FilterContext& ctx) {
  if (!pattern.predicate_id) return 0;
  std::uint64_t est = part.frequency(*pattern.predicate_id);
  for (std::uint32_t q : {pattern.s, pattern.o}) {
    const auto& e = ctx.vertices[q];
    std::uint64_t bits = e.is_variable ? e.popcount : (e.constant ? 1 : 0);
    est = std::min(est, bits);
  }
  return est;
}

std::vector<std::size_t> plan_type2(const SubQuery& sq, const PartitionStore& part,
                                    const FilterContext& ctx) {
  std::vector<std::uint64_t> est(sq.patterns.size());
  for (std::size_t i = 0; i < sq.patterns.size(); ++i) {
    est[i] = pattern_estimate(sq.patterns[i], part, ctx);
  }
  std::vector<std::size_t> order(sq.patterns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return est[a] < est[b]; });
  return order;
}

BindingTable execute_type2_plan(const SubQuery& sq, const PartitionStore& part,
                                const FilterContext& ctx,
                                std::span<const std::size_t> order,
                                const VerifySpec& verify,
                                std::uint64_t* intermediate_rows) {
  std::vector<std::uint32_t> schema;
  for (std::uint32_t v : sq.vertices) {
    if (ctx.vertices[v].is_variable) schema.push_back(v);
  }
  BindingTable empty(schema);
  ScanContext sc{part, ctx, restrict_vertex_for(verify, sq, ctx)};
  if (!restricted_constant_ok(sc.restrict_vertex, part, ctx)) return empty;
  for (std::size_t i : order) {
    if (pattern_estimate(sq.patterns[i], part, ctx) == 0) return empty;
  }

  std::vector<std::size_t> remaining(order.begin(), order.end());
  BindingTable current;
  bool started = false;
  while (!remaining.empty()) {
    std::size_t pick = 0;
    if (started) {
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (shares_variable(current, sq.patterns[remaining[k]])) {
          pick = k;
          break;
        }
      }
    }
    const RPattern& pattern = sq.patterns[remaining[pick]];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    if (!started) {
      current = scan_pattern(pattern, sc);
      started = true;
    } else {
      bool bound = shares_variable(current, pattern) ||
                   !ctx.vertices[pattern.s].is_variable ||
                   !ctx.vertices[pattern.o].is_variable;
      if (bound && current.rows() <= pattern_estimate(pattern, part, ctx)) {
        current = bind_join(current, pattern, sc);
      } else {
        current = op_ipj(current, scan_pattern(pattern, sc));
      }
    }
    if (intermediate_rows) *intermediate_rows += current.rows();
    if (current.empty()) return empty;
  }

  // Reorder columns to the ascending schema.
  BindingTable out(schema);
  std::vector<std::size_t> cols;
  for (std::uint32_t v : schema) cols.push_back(*current.column_of(v));
  std::vector<VertexId> buffer(schema.size());
  out.reserve(current.rows());
  for (std::size_t r = 0; r < current.rows(); ++r) {
    auto row = current.row(r);
    for (std::size_t c = 0; c < cols.size(); ++c) buffer[c] = row[cols[c]];
    out.add_row(buffer);
  }
  out.set_sorted_on(current.sorted_on());
  if (verify.mode == VerifyMode::Quorum) apply_quorum(out, part);
  return out;
}

BindingTable op_sp(const SubQuery& sq, const PartitionStore& part,
                   const FilterContext& ctx, const VerifySpec& verify) {
  if (sq.kind == SubQueryKind::TypeI && sq.patterns.size() == 1) {
    ScanContext sc{part, ctx, restrict_vertex_for(verify, sq, ctx)};
    if (!restricted_constant_ok(sc.restrict_vertex, part, ctx)) {
      return BindingTable(pattern_schema(sq.patterns[0], ctx));
    }
    BindingTable out = scan_pattern(sq.patterns[0], sc);
    if (verify.mode == VerifyMode::Quorum) apply_quorum(out, part);
    return out;
  }
  std::vector<std::size_t> order = plan_type2(sq, part, ctx);
  return execute_type2_plan(sq, part, ctx, order, verify);
}

BindingTable op_sp_type1(const SubQuery& sq, const PartitionStore& part,
                         const FilterContext& ctx, bool is_last) {
  VerifySpec v;
  if (is_last) v.mode = VerifyMode::SubjectInRange;
  return op_sp(sq, part, ctx, v);
}

BindingTable op_sp_type2(const SubQuery& sq, const PartitionStore& part,
                         const FilterContext& ctx, bool is_last) {
  VerifySpec v;
  if (is_last) v.mode = VerifyMode::Quorum;
  return op_sp(sq, part, ctx, v);
}

}  // namespace sgdq
