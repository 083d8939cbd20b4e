#include "sgdq/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>

#include "sgdq/error.hpp"

namespace sgdq {
namespace {

// Undirected weighted graph in CSR form.
struct WGraph {
  std::vector<std::uint32_t> xadj{0};
  std::vector<std::uint32_t> adj;
  std::vector<std::uint32_t> ew;
  std::vector<std::uint32_t> vw;

  std::uint32_t size() const { return static_cast<std::uint32_t>(vw.size()); }
  std::uint64_t total_weight() const {
    return std::accumulate(vw.begin(), vw.end(), std::uint64_t{0});
  }
};

WGraph from_rl_graph(const RlGraph& g) {
  WGraph w;
  const std::uint32_t n = g.vertex_count();
  w.vw.assign(n, 1);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> nb;
  for (std::uint32_t v = 0; v < n; ++v) {
    nb.clear();
    for (std::uint32_t e : g.incident(v)) {
      std::uint32_t u = g.other_end(e, v);
      if (u != v) nb.push_back({u, 1});
    }
    std::sort(nb.begin(), nb.end());
    for (std::size_t i = 0; i < nb.size();) {
      std::size_t j = i;
      std::uint32_t weight = 0;
      while (j < nb.size() && nb[j].first == nb[i].first) weight += nb[j++].second;
      w.adj.push_back(nb[i].first);
      w.ew.push_back(weight);
      i = j;
    }
    w.xadj.push_back(static_cast<std::uint32_t>(w.adj.size()));
  }
  return w;
}

std::vector<std::uint32_t> random_order(std::uint32_t n, std::mt19937_64& rng) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::uint32_t i = n; i > 1; --i) {
    std::uint32_t j = static_cast<std::uint32_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

// Heavy-edge matching. Returns the coarse graph and fills `cmap`.
WGraph coarsen(const WGraph& g, std::uint64_t max_vertex_weight,
               std::mt19937_64& rng, std::vector<std::uint32_t>& cmap) {
  const std::uint32_t n = g.size();
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> match(n, kNone);
  for (std::uint32_t v : random_order(n, rng)) {
    if (match[v] != kNone) continue;
    std::uint32_t best = kNone;
    std::uint32_t best_w = 0;
    for (std::uint32_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      std::uint32_t u = g.adj[i];
      if (match[u] != kNone || u == v) continue;
      if (std::uint64_t{g.vw[u]} + g.vw[v] > max_vertex_weight) continue;
      if (best == kNone || g.ew[i] > best_w ||
          (g.ew[i] == best_w && g.vw[u] < g.vw[best])) {
        best = u;
        best_w = g.ew[i];
      }
    }
    match[v] = best == kNone ? v : best;
    if (best != kNone) match[best] = v;
  }
  cmap.assign(n, kNone);
  std::uint32_t cn = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (cmap[v] != kNone) continue;
    cmap[v] = cn;
    cmap[match[v]] = cn;
    ++cn;
  }
  WGraph c;
  c.vw.assign(cn, 0);
  std::vector<std::vector<std::uint32_t>> members(cn);
  for (std::uint32_t v = 0; v < n; ++v) {
    c.vw[cmap[v]] += g.vw[v];
    members[cmap[v]].push_back(v);
  }
  std::vector<std::uint32_t> slot(cn, kNone);
  for (std::uint32_t cv = 0; cv < cn; ++cv) {
    std::size_t start = c.adj.size();
    for (std::uint32_t v : members[cv]) {
      for (std::uint32_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
        std::uint32_t cu = cmap[g.adj[i]];
        if (cu == cv) continue;
        if (slot[cu] == kNone) {
          slot[cu] = static_cast<std::uint32_t>(c.adj.size());
          c.adj.push_back(cu);
          c.ew.push_back(g.ew[i]);
        } else {
          c.ew[slot[cu]] += g.ew[i];
        }
      }
    }
    for (std::size_t i = start; i < c.adj.size(); ++i) slot[c.adj[i]] = kNone;
    c.xadj.push_back(static_cast<std::uint32_t>(c.adj.size()));
  }
  return c;
}

std::uint64_t cut_weight(const WGraph& g, const std::vector<std::uint32_t>& part) {
  std::uint64_t cut = 0;
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    for (std::uint32_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
      if (part[g.adj[i]] != part[v]) cut += g.ew[i];
    }
  }
  return cut / 2;
}

class Refiner {
 public:
  Refiner(const WGraph& g, std::vector<std::uint32_t>& part, std::uint32_t n,
          std::uint64_t max_weight)
      : g_(g), part_(part), n_(n), max_(max_weight), weight_(n, 0), count_(n, 0),
        conn_(n, 0) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      weight_[part[v]] += g.vw[v];
      ++count_[part[v]];
    }
  }

  // Greedy boundary moves with positive gain, or zero gain that improves
  // balance.
  void refine(int passes, std::mt19937_64& rng) {
    for (int pass = 0; pass < passes; ++pass) {
      std::uint64_t moves = 0;
      for (std::uint32_t v : random_order(g_.size(), rng)) {
        std::uint32_t own = part_[v];
        if (count_[own] <= 1) continue;
        load(v);
        std::uint32_t best = own;
        std::int64_t best_gain = 0;
        for (std::uint32_t p : touched_) {
          if (p == own || weight_[p] + g_.vw[v] > max_) continue;
          std::int64_t gain = static_cast<std::int64_t>(conn_[p]) -
                             static_cast<std::int64_t>(conn_[own]);
          if (best == own) {
            if (gain > 0 || (gain == 0 && weight_[own] > weight_[p] + g_.vw[v])) {
              best = p;
              best_gain = gain;
            }
          } else if (gain > best_gain ||
                     (gain == best_gain && weight_[p] < weight_[best])) {
            best = p;
            best_gain = gain;
          }
        }
        clear();
        if (best != own) {
          move(v, best);
          ++moves;
        }
      }
      if (moves == 0) break;
    }
  }

  // Moves vertices out of overweight parts, least cut damage first.
  void balance() {
    for (int round = 0; round < 4; ++round) {
      bool over = false;
      for (std::uint32_t p = 0; p < n_; ++p) over = over || weight_[p] > max_;
      if (!over) return;
      for (std::uint32_t v = 0; v < g_.size(); ++v) {
        std::uint32_t own = part_[v];
        if (weight_[own] <= max_ || count_[own] <= 1) continue;
        load(v);
        std::uint32_t best = own;
        std::int64_t best_gain = INT64_MIN;
        for (std::uint32_t p = 0; p < n_; ++p) {
          if (p == own || weight_[p] + g_.vw[v] > max_) continue;
          std::int64_t gain = static_cast<std::int64_t>(conn_[p]) -
                             static_cast<std::int64_t>(conn_[own]);
          if (gain > best_gain ||
              (gain == best_gain && weight_[p] < weight_[best])) {
            best = p;
            best_gain = gain;
          }
        }
        clear();
        if (best != own) move(v, best);
      }
    }
  }

  // Gives every empty part one vertex from the largest part.
  void fill_empty() {
    for (std::uint32_t p = 0; p < n_; ++p) {
      if (count_[p] > 0) continue;
      std::uint32_t donor = static_cast<std::uint32_t>(
          std::max_element(count_.begin(), count_.end()) - count_.begin());
      if (count_[donor] <= 1) return;
      std::uint32_t pick = UINT32_MAX;
      std::uint32_t pick_degree = UINT32_MAX;
      for (std::uint32_t v = 0; v < g_.size(); ++v) {
        if (part_[v] != donor) continue;
        std::uint32_t degree = g_.xadj[v + 1] - g_.xadj[v];
        if (degree < pick_degree) {
          pick = v;
          pick_degree = degree;
        }
      }
      move(pick, p);
    }
  }

 private:
  void load(std::uint32_t v) {
    touched_.push_back(part_[v]);
    for (std::uint32_t i = g_.xadj[v]; i < g_.xadj[v + 1]; ++i) {
      std::uint32_t p = part_[g_.adj[i]];
      if (conn_[p] == 0 && p != part_[v]) touched_.push_back(p);
      conn_[p] += g_.ew[i];
    }
  }
  void clear() {
    for (std::uint32_t p : touched_) conn_[p] = 0;
    touched_.clear();
  }
  void move(std::uint32_t v, std::uint32_t to) {
    std::uint32_t from = part_[v];
    weight_[from] -= g_.vw[v];
    --count_[from];
    weight_[to] += g_.vw[v];
    ++count_[to];
    part_[v] = to;
  }

  const WGraph& g_;
  std::vector<std::uint32_t>& part_;
  std::uint32_t n_;
  std::uint64_t max_;
  std::vector<std::uint64_t> weight_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint64_t> conn_;
  std::vector<std::uint32_t> touched_;
};

// Greedy graph growing: parts are grown one after another from random seeds
// by strongest connection.
std::vector<std::uint32_t> grow(const WGraph& g, std::uint32_t n,
                                std::uint64_t max_weight, std::mt19937_64& rng) {
  constexpr std::uint32_t kNone = UINT32_MAX;
  const std::uint32_t size = g.size();
  std::vector<std::uint32_t> part(size, kNone);
  std::vector<std::uint64_t> gain(size, 0);
  std::vector<std::uint32_t> order = random_order(size, rng);
  std::size_t cursor = 0;
  std::uint64_t remaining = g.total_weight();
  for (std::uint32_t k = 0; k + 1 < n; ++k) {
    std::uint64_t target = remaining / (n - k);
    std::uint64_t weight = 0;
    std::priority_queue<std::pair<std::uint64_t, std::uint32_t>> frontier;
    std::vector<char> too_heavy(size, 0);
    std::size_t seed = cursor;
    while (weight < target) {
      if (frontier.empty()) {
        while (seed < order.size() &&
               (part[order[seed]] != kNone || too_heavy[order[seed]])) {
          ++seed;
        }
        if (seed == order.size()) break;
        frontier.push({gain[order[seed]], order[seed]});
      }
      auto [gv, v] = frontier.top();
      frontier.pop();
      if (part[v] != kNone || too_heavy[v] || gv != gain[v]) continue;
      if (weight > 0 && weight + g.vw[v] > max_weight) {
        too_heavy[v] = 1;
        continue;
      }
      part[v] = k;
      weight += g.vw[v];
      for (std::uint32_t i = g.xadj[v]; i < g.xadj[v + 1]; ++i) {
        std::uint32_t u = g.adj[i];
        if (part[u] != kNone) continue;
        gain[u] += g.ew[i];
        frontier.push({gain[u], u});
      }
    }
    for (std::uint32_t v = 0; v < size; ++v) {
      if (part[v] == kNone) gain[v] = 0;
    }
    while (cursor < order.size() && part[order[cursor]] != kNone) ++cursor;
    remaining -= weight;
  }
  for (std::uint32_t& p : part) {
    if (p == kNone) p = n - 1;
  }
  return part;
}

// Partition ids ordered by smallest member vertex; empty parts last.
std::vector<std::uint32_t> canonical_labels(const std::vector<std::uint32_t>& part,
                                            std::uint32_t n) {
  std::vector<std::uint32_t> relabel(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (std::uint32_t p : part) {
    if (relabel[p] == UINT32_MAX) relabel[p] = next++;
  }
  for (std::uint32_t& r : relabel) {
    if (r == UINT32_MAX) r = next++;
  }
  std::vector<std::uint32_t> out(part.size());
  for (std::size_t v = 0; v < part.size(); ++v) out[v] = relabel[part[v]];
  return out;
}

}  // namespace

std::uint32_t max_part_size(std::uint32_t vertex_count, std::uint32_t n,
                            double balance_eps) {
  if (n == 0) return vertex_count;
  double bound = (1.0 + balance_eps) * vertex_count / n;
  auto size = static_cast<std::uint32_t>(std::ceil(bound - 1e-9));
  std::uint32_t floor_size = (vertex_count + n - 1) / n;
  return std::max(size, floor_size);
}

std::vector<OriginalPartition> partition_rl_graph(const RlGraph& graph,
                                                  const PartitionOptions& options) {
  const std::uint32_t n = options.n;
  const std::uint32_t nv = graph.vertex_count();
  if (n == 0) throw BuildError("partition count must be at least 1");
  if (nv == 0 && n == 1) return partitions_from_assignment(graph, {}, 1);
  if (n > nv) {
    throw BuildError("partition count " + std::to_string(n) +
                     " exceeds the number of RL vertices (" + std::to_string(nv) + ")");
  }
  if (n == 1) {
    std::vector<std::uint32_t> all(nv, 0);
    return partitions_from_assignment(graph, all, 1);
  }
  const std::uint64_t max_weight = max_part_size(nv, n, options.balance_eps);
  std::mt19937_64 rng(options.seed);

  std::vector<WGraph> levels;
  std::vector<std::vector<std::uint32_t>> maps;
  levels.push_back(from_rl_graph(graph));
  const std::uint32_t target = std::max<std::uint32_t>(2 * n, 64);
  while (levels.back().size() > target) {
    const WGraph& g = levels.back();
    std::uint64_t limit = std::max<std::uint64_t>(2, (3 * g.total_weight()) / (2 * target));
    limit = std::min(limit, max_weight);
    std::vector<std::uint32_t> cmap;
    WGraph c = coarsen(g, limit, rng, cmap);
    if (c.size() * 20 > g.size() * 19) break;  // matching stalled
    maps.push_back(std::move(cmap));
    levels.push_back(std::move(c));
  }

  const WGraph& coarsest = levels.back();
  std::vector<std::uint32_t> best;
  std::uint64_t best_cut = UINT64_MAX;
  for (int t = 0; t < std::max(1, options.initial_tries); ++t) {
    std::mt19937_64 try_rng(options.seed * 1000003u + static_cast<std::uint64_t>(t));
    std::vector<std::uint32_t> part = grow(coarsest, n, max_weight, try_rng);
    Refiner r(coarsest, part, n, max_weight);
    r.balance();
    r.refine(options.refinement_passes, try_rng);
    std::uint64_t cut = cut_weight(coarsest, part);
    if (cut < best_cut) {
      best_cut = cut;
      best = std::move(part);
    }
  }

  std::vector<std::uint32_t> part = std::move(best);
  for (std::size_t level = levels.size() - 1; level-- > 0;) {
    const auto& cmap = maps[level];
    std::vector<std::uint32_t> fine(cmap.size());
    for (std::size_t v = 0; v < cmap.size(); ++v) fine[v] = part[cmap[v]];
    part = std::move(fine);
    Refiner r(levels[level], part, n, max_weight);
    r.balance();
    r.refine(options.refinement_passes, rng);
  }
  {
    Refiner r(levels.front(), part, n, max_weight);
    r.fill_empty();
    r.balance();
  }
  return partitions_from_assignment(graph, canonical_labels(part, n), n);
}

std::vector<OriginalPartition> import_partition(
    std::span<const std::optional<std::uint32_t>> assignment, std::uint32_t n,
    const RlGraph& graph, std::vector<std::string>* warnings) {
  if (n == 0) throw BuildError("partition count must be at least 1");
  std::vector<std::uint32_t> plain(graph.vertex_count());
  for (std::uint32_t v = 0; v < graph.vertex_count(); ++v) {
    if (v >= assignment.size() || !assignment[v]) {
      throw BuildError("partition assignment is missing vertex " +
                       std::to_string(v + 1) + " (" +
                       graph.vertices()[v].to_ntriples() + ")");
    }
    if (*assignment[v] >= n) {
      throw BuildError("vertex " + std::to_string(v + 1) + " assigned to partition " +
                       std::to_string(*assignment[v]) + ", expected < " +
                       std::to_string(n));
    }
    plain[v] = *assignment[v];
  }
  auto parts = partitions_from_assignment(graph, plain, n);
  for (const auto& p : parts) {
    if (p.vertices.empty() && warnings) {
      warnings->push_back("partition " + std::to_string(p.id) + " is empty");
    }
  }
  return parts;
}

std::vector<std::optional<std::uint32_t>> read_partition_file(std::istream& in) {
  std::vector<std::optional<std::uint32_t>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
      out.push_back(std::nullopt);
      continue;
    }
    auto e = line.find_last_not_of(" \t\r");
    std::string value = line.substr(b, e - b + 1);
    if (value == "-") {
      out.push_back(std::nullopt);
      continue;
    }
    std::uint32_t id = 0;
    std::istringstream is(value);
    if (!(is >> id) || !is.eof()) {
      throw BuildError("partition file line " + std::to_string(line_no) +
                       ": expected a partition id");
    }
    out.push_back(id);
  }
  return out;
}

void write_partition_file(std::ostream& out,
                          std::span<const std::uint32_t> assignment) {
  for (std::uint32_t p : assignment) out << p << '\n';
}

void write_metis_graph(std::ostream& out, const RlGraph& graph) {
  WGraph w = from_rl_graph(graph);
  out << w.size() << ' ' << w.adj.size() / 2 << '\n';
  for (std::uint32_t v = 0; v < w.size(); ++v) {
    for (std::uint32_t i = w.xadj[v]; i < w.xadj[v + 1]; ++i) {
      if (i > w.xadj[v]) out << ' ';
      out << w.adj[i] + 1;
    }
    out << '\n';
  }
}

std::uint64_t count_cut_edges(const RlGraph& graph,
                              std::span<const std::uint32_t> assignment) {
  std::uint64_t cut = 0;
  for (const RlEdge& e : graph.edges()) {
    if (assignment[e.from] != assignment[e.to]) ++cut;
  }
  return cut;
}

std::uint32_t auto_partition_count(std::size_t r_triple_count,
                                   std::uint32_t rl_vertex_count) {
  std::size_t n = std::clamp<std::size_t>(r_triple_count / 2000000, 2, 500);
  n = std::min<std::size_t>(n, rl_vertex_count);
  return static_cast<std::uint32_t>(std::max<std::size_t>(n, 1));
}

ExpandedPartition expand_1uhc(const OriginalPartition& original,
                              const RlGraph& graph, VertexRange original_range,
                              std::uint32_t vertex_id_count) {
  const std::uint32_t nv = graph.vertex_count();
  std::vector<std::uint8_t> role(nv, 0);  // 1 = original, 2 = cut vertex
  for (std::uint32_t v : original.vertices) role[v] = 1;
  std::vector<std::uint32_t> edges;
  std::vector<std::uint32_t> cut_vertices;
  for (std::uint32_t v : original.vertices) {
    for (std::uint32_t e : graph.incident(v)) {
      edges.push_back(e);
      std::uint32_t u = graph.other_end(e, v);
      if (role[u] == 0) {
        role[u] = 2;
        cut_vertices.push_back(u);
      }
    }
  }
  for (std::uint32_t c : cut_vertices) {
    for (std::uint32_t e : graph.incident(c)) {
      if (role[graph.other_end(e, c)] == 2) edges.push_back(e);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::uint32_t> present;
  present.reserve(original.vertices.size() + cut_vertices.size());
  for (std::uint32_t e : edges) {
    present.push_back(graph.edges()[e].from);
    present.push_back(graph.edges()[e].to);
  }
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());

  ExpandedPartition out;
  out.id = original.id;
  out.edges = std::move(edges);
  out.p_vector = BitVector::from_positions(vertex_id_count, present);
  out.original_range = original_range;
  return out;
}

PartitionReport compute_report(const Dataset& dataset, const RlGraph& graph,
                               std::span<const OriginalPartition> originals,
                               std::span<const ExpandedPartition> expanded) {
  PartitionReport r;
  r.n = static_cast<std::uint32_t>(originals.size());
  r.cut_edges = count_cut_edges(graph, assignment_of(graph, originals));
  r.dataset_triples = dataset.triples.size();
  r.a_triples = dataset.a_triples.size();
  r.r_triples = dataset.r_triples.size();
  for (const auto& p : expanded) r.partition_triples += p.edges.size();
  r.alpha = r.dataset_triples == 0
                ? 1.0
                : static_cast<double>(r.a_triples + r.partition_triples) /
                      static_cast<double>(r.dataset_triples);
  return r;
}

void write_report_table(std::ostream& out, const PartitionReport& report) {
  out << std::left << std::setw(12) << "#partitions" << std::setw(16)
      << "#cutting edges" << std::setw(12) << "alpha" << std::setw(12) << "|D|"
      << std::setw(12) << "|D_A|" << std::setw(12) << "|D_R|" << "sum|P_i|\n";
  std::ostringstream alpha;
  alpha << std::fixed << std::setprecision(4) << report.alpha;
  out << std::left << std::setw(12) << report.n << std::setw(16)
      << report.cut_edges << std::setw(12) << alpha.str() << std::setw(12)
      << report.dataset_triples << std::setw(12) << report.a_triples
      << std::setw(12) << report.r_triples << report.partition_triples << '\n';
}

void write_report_kv(std::ostream& out, const PartitionReport& report) {
  out << "partitions=" << report.n << '\n'
      << "cut_edges=" << report.cut_edges << '\n'
      << "alpha=" << std::setprecision(17) << report.alpha << '\n'
      << "dataset_triples=" << report.dataset_triples << '\n'
      << "a_triples=" << report.a_triples << '\n'
      << "r_triples=" << report.r_triples << '\n'
      << "partition_triples=" << report.partition_triples << '\n';
}

}  // namespace sgdq
