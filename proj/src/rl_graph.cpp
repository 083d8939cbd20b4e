#include "sgdq/rl_graph.hpp"

#include <algorithm>
#include <string>

#include "sgdq/error.hpp"

namespace sgdq {

RlGraph::RlGraph(std::vector<Term> vertices, std::vector<RlEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const std::uint32_t n = vertex_count();
  offsets_.assign(n + 1, 0);
  for (const RlEdge& e : edges_) {
    if (e.from >= n || e.to >= n) throw BuildError("edge endpoint out of range");
    ++offsets_[e.from + 1];
    if (e.to != e.from) ++offsets_[e.to + 1];
  }
  for (std::uint32_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
  incident_.resize(offsets_[n]);
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const RlEdge& e = edges_[i];
    incident_[fill[e.from]++] = i;
    if (e.to != e.from) incident_[fill[e.to]++] = i;
  }
}

RlGraph RlGraph::renumbered(std::span<const std::uint32_t> new_index) const {
  std::vector<Term> vertices(vertices_.size());
  for (std::uint32_t v = 0; v < vertex_count(); ++v) {
    vertices[new_index[v]] = vertices_[v];
  }
  std::vector<RlEdge> edges = edges_;
  for (RlEdge& e : edges) {
    e.from = new_index[e.from];
    e.to = new_index[e.to];
  }
  return RlGraph(std::move(vertices), std::move(edges));
}

RlGraph build_rl_graph(const Dataset& dataset,
                       const PredicateDictionary& predicates) {
  std::vector<Term> vertices;
  vertices.reserve(dataset.r_triples.size() * 2);
  for (const Triple& t : dataset.r_triples) {
    vertices.push_back(t.s);
    vertices.push_back(t.o);
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  auto index_of = [&](const Term& t) {
    return static_cast<std::uint32_t>(
        std::lower_bound(vertices.begin(), vertices.end(), t) - vertices.begin());
  };
  std::vector<RlEdge> edges;
  edges.reserve(dataset.r_triples.size());
  for (const Triple& t : dataset.r_triples) {
    auto p = predicates.find(t.p);
    if (!p) throw BuildError("unknown predicate <" + t.p.lexical + ">");
    edges.push_back({index_of(t.s), index_of(t.o), *p});
  }
  return RlGraph(std::move(vertices), std::move(edges));
}

std::vector<OriginalPartition> partitions_from_assignment(
    const RlGraph& graph, std::span<const std::uint32_t> assignment,
    std::uint32_t n) {
  std::vector<OriginalPartition> parts(n);
  for (std::uint32_t i = 0; i < n; ++i) parts[i].id = i;
  for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
    if (assignment[v] >= n) throw BuildError("partition id out of range");
    parts[assignment[v]].vertices.push_back(v);
  }
  const auto& edges = graph.edges();
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    std::uint32_t a = assignment[edges[i].from];
    if (a == assignment[edges[i].to]) parts[a].edges.push_back(i);
  }
  return parts;
}

std::vector<std::uint32_t> assignment_of(
    const RlGraph& graph, std::span<const OriginalPartition> partitions) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  std::vector<std::uint32_t> assignment(graph.vertex_count(), kUnset);
  for (std::uint32_t p = 0; p < partitions.size(); ++p) {
    for (std::uint32_t v : partitions[p].vertices) {
      if (v >= assignment.size()) throw BuildError("vertex out of range");
      if (assignment[v] != kUnset) {
        throw BuildError("vertex " + std::to_string(v) +
                         " assigned to two partitions");
      }
      assignment[v] = p;
    }
  }
  for (std::uint32_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] == kUnset) {
      throw BuildError("vertex " + graph.vertices()[v].to_ntriples() +
                       " has no partition");
    }
  }
  return assignment;
}

VertexNumbering assign_vertex_ids(const RlGraph& graph,
                                  std::span<const OriginalPartition> partitions,
                                  std::span<const Term> a_only) {
  assignment_of(graph, partitions);  // validates the cover
  VertexNumbering out;
  out.new_index.assign(graph.vertex_count(), 0);
  std::vector<Term> terms;
  terms.reserve(graph.vertex_count() + a_only.size());
  std::vector<VertexRange> ranges;
  for (const OriginalPartition& p : partitions) {
    std::vector<std::uint32_t> members = p.vertices;
    std::sort(members.begin(), members.end());
    VertexRange r{static_cast<VertexId>(terms.size() + 1),
                  static_cast<VertexId>(terms.size() + members.size())};
    for (std::uint32_t v : members) {
      out.new_index[v] = static_cast<std::uint32_t>(terms.size());
      terms.push_back(graph.vertices()[v]);
    }
    ranges.push_back(r);
  }
  for (const Term& t : a_only) terms.push_back(t);
  out.dictionary =
      DictionaryR(std::move(terms), std::move(ranges), graph.vertex_count());
  return out;
}

std::vector<Term> a_only_subjects(const Dataset& dataset) {
  std::vector<Term> rl;
  rl.reserve(dataset.r_triples.size() * 2);
  for (const Triple& t : dataset.r_triples) {
    rl.push_back(t.s);
    rl.push_back(t.o);
  }
  std::sort(rl.begin(), rl.end());
  rl.erase(std::unique(rl.begin(), rl.end()), rl.end());
  std::vector<Term> out;
  for (const Triple& t : dataset.a_triples) {
    if (!std::binary_search(rl.begin(), rl.end(), t.s)) out.push_back(t.s);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<OriginalPartition> renumber_partitions(
    std::span<const OriginalPartition> partitions,
    std::span<const std::uint32_t> new_index) {
  std::vector<OriginalPartition> out(partitions.begin(), partitions.end());
  for (OriginalPartition& p : out) {
    for (std::uint32_t& v : p.vertices) v = new_index[v];
    std::sort(p.vertices.begin(), p.vertices.end());
  }
  return out;
}

}  // namespace sgdq
