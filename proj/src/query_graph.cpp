#include "sgdq/query_graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sgdq/error.hpp"

namespace sgdq {

std::optional<std::uint32_t> SplitQuery::vertex_of(const QueryTerm& term) const {
  for (std::uint32_t i = 0; i < graph.vertices.size(); ++i) {
    if (graph.vertices[i].term == term) return i;
  }
  return std::nullopt;
}

SplitQuery split_query(const Query& query, const PredicateDictionary& predicates) {
  SplitQuery out;
  auto vertex = [&](const QueryTerm& t) {
    if (auto v = out.vertex_of(t)) return *v;
    out.graph.vertices.push_back(QueryVertex{t});
    return static_cast<std::uint32_t>(out.graph.vertices.size() - 1);
  };
  std::vector<bool> is_attribute(query.patterns.size(), false);
  std::vector<std::optional<PredicateId>> ids(query.patterns.size());
  for (std::size_t i = 0; i < query.patterns.size(); ++i) {
    const TriplePattern& tp = query.patterns[i];
    if (!is_variable(tp.s) && std::get<Term>(tp.s).is_literal()) {
      throw QueryError("pattern " + std::to_string(i + 1) +
                       " has a literal subject");
    }
    ids[i] = predicates.find(tp.p);
    if (!ids[i]) {
      out.warnings.push_back("unknown predicate " + tp.p.to_ntriples() +
                             "; the query has no results");
      out.known_empty = true;
    } else {
      is_attribute[i] =
          predicates.predicate_class(*ids[i]) == PredicateClass::Attribute;
    }
  }
  for (std::size_t i = 0; i < query.patterns.size(); ++i) {
    if (is_attribute[i]) continue;
    const TriplePattern& tp = query.patterns[i];
    if (!is_variable(tp.o) && std::get<Term>(tp.o).is_literal()) {
      out.warnings.push_back("relation " + tp.p.to_ntriples() +
                             " never has a literal object; the query has no results");
      out.known_empty = true;
    }
    RPattern r;
    r.s = vertex(tp.s);
    r.o = vertex(tp.o);
    r.predicate = tp.p;
    r.predicate_id = ids[i];
    r.text_index = i;
    out.graph.edges.push_back(std::move(r));
  }
  out.graph.rl_vertex_count = static_cast<std::uint32_t>(out.graph.vertices.size());
  for (std::size_t i = 0; i < query.patterns.size(); ++i) {
    if (!is_attribute[i]) continue;
    const TriplePattern& tp = query.patterns[i];
    out.a_patterns.push_back({vertex(tp.s), tp.p, ids[i], tp.o, i});
  }
  out.a_groups.resize(out.graph.vertices.size());
  for (std::uint32_t v = 0; v < out.graph.vertices.size(); ++v) {
    out.a_groups[v].subject = to_string(out.graph.vertices[v].term);
  }
  for (const AttributePattern& a : out.a_patterns) {
    APattern p{a.predicate, std::nullopt};
    if (!is_variable(a.object)) p.object = std::get<Term>(a.object);
    out.a_groups[a.subject].patterns.push_back(std::move(p));
  }
  return out;
}

std::size_t TransformedQueryGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& nb : adjacency) total += nb.size();
  return total / 2;
}

bool TransformedQueryGraph::adjacent(std::uint32_t i, std::uint32_t j) const {
  return std::binary_search(adjacency.at(i).begin(), adjacency.at(i).end(), j);
}

std::vector<std::vector<std::uint32_t>> TransformedQueryGraph::components() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(size(), false);
  for (std::uint32_t start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    std::vector<std::uint32_t> comp{start};
    seen[start] = true;
    for (std::size_t k = 0; k < comp.size(); ++k) {
      for (std::uint32_t j : adjacency[comp[k]]) {
        if (!seen[j]) {
          seen[j] = true;
          comp.push_back(j);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

Pair make_pair_key(std::uint32_t a, std::uint32_t b) {
  return a < b ? Pair{a, b} : Pair{b, a};
}

// Remaining undirected pairs with the patterns between them.
class PairGraph {
 public:
  PairGraph(const QueryRlGraph& g) : g_(g) {
    for (std::uint32_t i = 0; i < g.edges.size(); ++i) {
      const RPattern& e = g.edges[i];
      if (e.s == e.o) continue;
      pairs_[make_pair_key(e.s, e.o)].push_back(i);
    }
  }

  bool empty() const { return pairs_.empty(); }
  bool has(std::uint32_t a, std::uint32_t b) const {
    return pairs_.count(make_pair_key(a, b)) > 0;
  }
  std::vector<std::uint32_t> neighbors(std::uint32_t v) const {
    std::vector<std::uint32_t> out;
    for (const auto& [key, patterns] : pairs_) {
      if (key.first == v) out.push_back(key.second);
      if (key.second == v) out.push_back(key.first);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::uint32_t max_degree_vertex() const {
    std::map<std::uint32_t, std::uint32_t> degree;
    for (const auto& [key, patterns] : pairs_) {
      ++degree[key.first];
      ++degree[key.second];
    }
    std::uint32_t best = 0, best_degree = 0;
    for (const auto& [v, d] : degree) {
      if (d > best_degree) {
        best = v;
        best_degree = d;
      }
    }
    return best;
  }
  // Removes the pairs and returns their patterns in text order.
  std::vector<std::uint32_t> take(const std::vector<Pair>& keys) {
    std::vector<std::uint32_t> out;
    for (const Pair& k : keys) {
      auto it = pairs_.find(k);
      out.insert(out.end(), it->second.begin(), it->second.end());
      pairs_.erase(it);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::size_t patterns_between(std::uint32_t a, std::uint32_t b) const {
    return pairs_.at(make_pair_key(a, b)).size();
  }
  std::uint32_t first_pattern(std::uint32_t a, std::uint32_t b) const {
    return pairs_.at(make_pair_key(a, b)).front();
  }

 private:
  const QueryRlGraph& g_;
  std::map<Pair, std::vector<std::uint32_t>> pairs_;
};

// Largest clique (3..5 vertices) through v among remaining pairs, vertices
// ascending; empty when none.
std::vector<std::uint32_t> largest_clique(const PairGraph& pg, std::uint32_t v) {
  std::vector<std::uint32_t> nb = pg.neighbors(v);
  const std::size_t n = nb.size();
  for (std::size_t size = 4; size >= 2; --size) {
    if (n < size) continue;
    std::vector<std::size_t> idx(size);
    // Lexicographic enumeration of size-subsets of nb.
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      bool clique = true;
      for (std::size_t a = 0; a < size && clique; ++a) {
        for (std::size_t b = a + 1; b < size && clique; ++b) {
          clique = pg.has(nb[idx[a]], nb[idx[b]]);
        }
      }
      if (clique) {
        std::vector<std::uint32_t> out{v};
        for (std::size_t i : idx) out.push_back(nb[i]);
        std::sort(out.begin(), out.end());
        return out;
      }
      std::size_t k = size;
      while (k > 0 && idx[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t i = k; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return {};
}

}  // namespace

TransformedQueryGraph decompose(const QueryRlGraph& graph) {
  TransformedQueryGraph tgq;
  auto emit = [&](SubQueryKind kind, const std::vector<std::uint32_t>& patterns) {
    SubQuery sq;
    sq.id = static_cast<std::uint32_t>(tgq.subqueries.size());
    sq.kind = kind;
    std::set<std::uint32_t> vertices;
    for (std::uint32_t i : patterns) {
      sq.patterns.push_back(graph.edges[i]);
      vertices.insert(graph.edges[i].s);
      vertices.insert(graph.edges[i].o);
    }
    sq.vertices.assign(vertices.begin(), vertices.end());
    tgq.subqueries.push_back(std::move(sq));
  };

  PairGraph pg(graph);
  while (!pg.empty()) {
    std::uint32_t v = pg.max_degree_vertex();
    while (true) {
      std::vector<std::uint32_t> clique = largest_clique(pg, v);
      if (clique.empty()) break;
      std::vector<Pair> keys;
      for (std::size_t a = 0; a < clique.size(); ++a) {
        for (std::size_t b = a + 1; b < clique.size(); ++b) {
          keys.push_back(make_pair_key(clique[a], clique[b]));
        }
      }
      emit(SubQueryKind::TypeII, pg.take(keys));
    }
    std::vector<std::uint32_t> rest = pg.neighbors(v);
    std::sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) {
      return pg.first_pattern(v, a) < pg.first_pattern(v, b);
    });
    for (std::uint32_t u : rest) {
      bool parallel = pg.patterns_between(v, u) > 1;
      emit(parallel ? SubQueryKind::TypeII : SubQueryKind::TypeI,
           pg.take({make_pair_key(v, u)}));
    }
  }
  for (std::uint32_t i = 0; i < graph.edges.size(); ++i) {
    if (graph.edges[i].s == graph.edges[i].o) emit(SubQueryKind::TypeI, {i});
  }

  const std::size_t m = tgq.subqueries.size();
  tgq.adjacency.assign(m, {});
  tgq.labels.assign(m, {});
  for (std::uint32_t i = 0; i < m; ++i) {
    std::set<Term> labels;
    for (const RPattern& p : tgq.subqueries[i].patterns) labels.insert(p.predicate);
    tgq.labels[i].assign(labels.begin(), labels.end());
    for (std::uint32_t j = i + 1; j < m; ++j) {
      const auto& a = tgq.subqueries[i].vertices;
      const auto& b = tgq.subqueries[j].vertices;
      std::vector<std::uint32_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        tgq.adjacency[i].push_back(j);
        tgq.adjacency[j].push_back(i);
      }
    }
  }
  for (auto& nb : tgq.adjacency) std::sort(nb.begin(), nb.end());
  return tgq;
}

}  // namespace sgdq
