#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qosketch/parallel.hpp"

namespace qosketch {

using node_t = std::uint32_t;
using Edge = std::pair<node_t, node_t>;  // canonical form: first < second

inline Edge make_edge(node_t a, node_t b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// Immutable undirected simple graph in compressed adjacency form.
/// Neighbor lists are sorted ascending; degrees(v) == adjacency(v).size().
class Graph {
 public:
  Graph() = default;

  /// Canonicalizes: drops self-loops, dedupes, mirrors both directions.
  /// Node ids must already be dense in [0, num_nodes).
  static Graph from_edges(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const node_t> neighbors(node_t v) const {
    return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(node_t v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(node_t u, node_t v) const;

  /// All undirected edges, canonical and sorted.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_;  // size n+1
  std::vector<node_t> neighbors_;     // size 2m
};

/// Logical view of a graph with a batch of edges removed. The base graph is
/// untouched; only the endpoints of removed edges get patched neighbor lists.
class MaskedView {
 public:
  /// Throws std::invalid_argument if any edge is absent from the base graph.
  MaskedView(const Graph& base, std::span<const Edge> removed);

  std::size_t num_nodes() const { return base_->num_nodes(); }
  std::span<const node_t> neighbors(node_t v) const {
    auto it = patched_.find(v);
    if (it == patched_.end()) return base_->neighbors(v);
    return {it->second.data(), it->second.size()};
  }
  std::size_t degree(node_t v) const { return neighbors(v).size(); }
  const Graph& base() const { return *base_; }

 private:
  const Graph* base_;
  std::unordered_map<node_t, std::vector<node_t>> patched_;
};

template <typename G>
concept GraphLike = requires(const G& g, node_t v) {
  { g.num_nodes() } -> std::convertible_to<std::size_t>;
  { g.degree(v) } -> std::convertible_to<std::size_t>;
  { g.neighbors(v) } -> std::convertible_to<std::span<const node_t>>;
};

inline constexpr int kUnreachable = -1;

/// BFS distances from src, truncated at max_depth (negative = unbounded).
/// Unreached nodes get kUnreachable.
template <GraphLike G>
void bfs_distances(const G& g, node_t src, int max_depth, std::vector<int>& dist) {
  dist.assign(g.num_nodes(), kUnreachable);
  std::vector<node_t> frontier{src};
  dist[src] = 0;
  int depth = 0;
  std::vector<node_t> next;
  while (!frontier.empty() && (max_depth < 0 || depth < max_depth)) {
    next.clear();
    for (node_t v : frontier) {
      for (node_t w : g.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = depth + 1;
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
    ++depth;
  }
}

/// Hop sets of a single node on any graph view; result[s-1] = N_v^s, sorted.
template <GraphLike G>
std::vector<std::vector<node_t>> local_hop_sets(const G& g, node_t v, int r) {
  std::vector<std::vector<node_t>> sets(r);
  std::unordered_map<node_t, int> seen;
  seen.emplace(v, 0);
  std::vector<node_t> frontier{v};
  std::vector<node_t> next;
  for (int depth = 1; depth <= r && !frontier.empty(); ++depth) {
    next.clear();
    for (node_t u : frontier) {
      for (node_t w : g.neighbors(u)) {
        if (seen.emplace(w, depth).second) next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    sets[depth - 1] = next;
    frontier.swap(next);
  }
  return sets;
}

/// Exact shortest-path-distance-s neighbor lists, s = 1..r, for every node.
class HopNeighborhoods {
 public:
  HopNeighborhoods() = default;
  HopNeighborhoods(int r, std::vector<std::size_t> offsets, std::vector<node_t> ids)
      : r_(r), offsets_(std::move(offsets)), ids_(std::move(ids)) {}

  int max_hop() const { return r_; }
  std::size_t num_nodes() const {
    return r_ == 0 ? 0 : (offsets_.size() - 1) / static_cast<std::size_t>(r_);
  }

  /// Nodes at exact shortest-path distance s from v, sorted ascending. s in 1..r.
  std::span<const node_t> set(node_t v, int s) const {
    if (s < 1 || s > r_)
      throw std::out_of_range("HopNeighborhoods::set: hop out of range");
    std::size_t slot = static_cast<std::size_t>(v) * r_ + (s - 1);
    return {ids_.data() + offsets_[slot], offsets_[slot + 1] - offsets_[slot]};
  }

 private:
  int r_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<node_t> ids_;
};

/// Per-node truncated BFS. Isolated nodes yield empty sets.
template <GraphLike G>
HopNeighborhoods hop_neighborhoods(const G& g, int r, unsigned threads = 0) {
  if (r < 1) throw std::invalid_argument("hop_neighborhoods: r must be >= 1");
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::vector<node_t>>> per_node(n);
  parallel_for(n, threads, [&](std::size_t v) {
    per_node[v] = local_hop_sets(g, static_cast<node_t>(v), r);
  });
  std::vector<std::size_t> offsets(n * static_cast<std::size_t>(r) + 1, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < n; ++v)
    for (int s = 0; s < r; ++s) {
      total += per_node[v][s].size();
      offsets[v * r + s + 1] = total;
    }
  std::vector<node_t> ids(total);
  parallel_for(n, threads, [&](std::size_t v) {
    for (int s = 0; s < r; ++s)
      std::copy(per_node[v][s].begin(), per_node[v][s].end(),
                ids.begin() + offsets[v * r + s]);
  });
  return HopNeighborhoods(r, std::move(offsets), std::move(ids));
}

struct LoadReport {
  std::vector<std::int64_t> original_ids;  // dense id -> original label
  std::size_t lines_parsed = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

enum class EdgeFileFormat { tsv, csv };

/// Reads an edge list (one integer pair per line, '#' lines ignored),
/// densifies ids in first-appearance order and canonicalizes the graph.
/// Throws std::runtime_error on malformed lines (with line number) and on
/// files containing no edges.
Graph load_edge_list(const std::string& path, EdgeFileFormat format,
                     LoadReport* report = nullptr);

void save_edge_list(const std::string& path, std::span<const Edge> edges);

struct SplitRatios {
  double train = 0.7, valid = 0.1, test = 0.2;
};

struct DatasetSplit {
  std::vector<Edge> train_pos, valid_pos, test_pos;
  std::vector<Edge> valid_neg, test_neg;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

/// Deterministic 70-10-20 split with one uniform non-edge negative per
/// validation/test positive. Requires at least 10 edges.
DatasetSplit split_edges(const Graph& g, std::uint64_t seed,
                         SplitRatios ratios = {});

/// Graph visible to the model: train positives only (optionally + validation
/// positives, for collaboration-style evaluation setups).
Graph observed_graph(const Graph& g, const DatasetSplit& split,
                     bool include_valid = false);

/// Uniform negatives (non-edges of g), distinct among themselves;
/// deterministic per (seed, stream_id).
std::vector<Edge> sample_negative_edges(const Graph& g, std::size_t count,
                                        std::uint64_t seed,
                                        std::uint64_t stream_id = 0);

}  // namespace qosketch
