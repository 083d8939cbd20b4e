#include "sgdq/summary_graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sgdq/error.hpp"

namespace sgdq {

SummaryGraph::SummaryGraph(std::vector<Adjacency> adjacency,
                           std::vector<std::vector<PredicateId>> labels)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)) {
  const std::uint32_t n = vertex_count();
  labels_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::sort(adjacency_[i].begin(), adjacency_[i].end());
    std::sort(labels_[i].begin(), labels_[i].end());
    DenseBits mask(n);
    mask.set(i);
    for (const auto& [j, m] : adjacency_[i]) {
      if (j >= n) throw std::out_of_range("summary graph neighbour");
      mask.set(j);
    }
    neighbor_masks_.push_back(std::move(mask));
  }
}

std::size_t SummaryGraph::edge_count() const {
  std::size_t total = 0;
  for (std::uint32_t i = 0; i < vertex_count(); ++i) {
    for (const auto& [j, m] : adjacency_[i]) total += j > i;
  }
  return total;
}

std::vector<std::uint32_t> SummaryGraph::neighbors(std::uint32_t i) const {
  if (i >= vertex_count()) {
    throw std::out_of_range("unknown partition " + std::to_string(i));
  }
  std::vector<std::uint32_t> out{i};
  for (const auto& [j, m] : adjacency_[i]) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

BitVector SummaryGraph::label_subset_candidates(
    std::span<const std::optional<PredicateId>> required) const {
  const std::uint32_t n = vertex_count();
  for (const auto& p : required) {
    if (!p) return BitVector::zeros(n);
  }
  BitVectorBuilder b(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    bool ok = true;
    for (const auto& p : required) {
      ok = ok && std::binary_search(labels_[i].begin(), labels_[i].end(), *p);
    }
    if (ok) b.set(i);
  }
  return std::move(b).finish();
}

SummaryGraph build_summary_graph(const RlGraph& graph,
                                 std::span<const std::uint32_t> assignment,
                                 std::span<const ExpandedPartition> expanded) {
  const std::size_t n = expanded.size();
  std::vector<std::map<std::uint32_t, std::uint64_t>> adj(n);
  for (const RlEdge& e : graph.edges()) {
    std::uint32_t a = assignment[e.from], b = assignment[e.to];
    if (a == b) continue;
    ++adj[a][b];
    ++adj[b][a];
  }
  std::vector<SummaryGraph::Adjacency> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    adjacency[i].assign(adj[i].begin(), adj[i].end());
  }
  std::vector<std::vector<PredicateId>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::uint32_t e : expanded[i].edges) {
      labels[i].push_back(graph.edges()[e].predicate);
    }
    std::sort(labels[i].begin(), labels[i].end());
    labels[i].erase(std::unique(labels[i].begin(), labels[i].end()), labels[i].end());
  }
  return SummaryGraph(std::move(adjacency), std::move(labels));
}

void write_summary_graph(std::ostream& out, const SummaryGraph& sg,
                         const PredicateDictionary& predicates) {
  for (std::uint32_t i = 0; i < sg.vertex_count(); ++i) {
    out << i << " |";
    for (const auto& [j, m] : sg.adjacency(i)) out << ' ' << j << ':' << m;
    out << " |";
    for (PredicateId p : sg.labels(i)) out << ' ' << predicates.term(p).to_ntriples();
    out << '\n';
  }
}

SummaryGraph read_summary_graph(std::istream& in,
                                const PredicateDictionary& predicates) {
  std::vector<SummaryGraph::Adjacency> adjacency;
  std::vector<std::vector<PredicateId>> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto bar1 = line.find('|');
    auto bar2 = bar1 == std::string::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string::npos) throw StoreCorruptError("summary graph: malformed line");
    std::uint32_t id = 0;
    std::istringstream head(line.substr(0, bar1));
    if (!(head >> id) || id != adjacency.size()) {
      throw StoreCorruptError("summary graph: unexpected vertex id");
    }
    SummaryGraph::Adjacency adj;
    std::istringstream nb(line.substr(bar1 + 1, bar2 - bar1 - 1));
    std::string tok;
    while (nb >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw StoreCorruptError("summary graph: bad edge");
      try {
        adj.push_back({static_cast<std::uint32_t>(std::stoul(tok.substr(0, colon))),
                       std::stoull(tok.substr(colon + 1))});
      } catch (const std::exception&) {
        throw StoreCorruptError("summary graph: bad edge");
      }
    }
    std::vector<PredicateId> lab;
    std::istringstream ls(line.substr(bar2 + 1));
    while (ls >> tok) {
      if (tok.size() < 2 || tok.front() != '<' || tok.back() != '>') {
        throw StoreCorruptError("summary graph: bad label");
      }
      auto p = predicates.find(Term::iri(tok.substr(1, tok.size() - 2)));
      if (!p) throw StoreCorruptError("summary graph: unknown label " + tok);
      lab.push_back(*p);
    }
    adjacency.push_back(std::move(adj));
    labels.push_back(std::move(lab));
  }
  try {
    return SummaryGraph(std::move(adjacency), std::move(labels));
  } catch (const std::out_of_range&) {
    throw StoreCorruptError("summary graph: neighbour out of range");
  }
}

}  // namespace sgdq
