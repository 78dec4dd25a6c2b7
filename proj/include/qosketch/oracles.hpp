#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "qosketch/graph.hpp"

namespace qosketch {

/// Exact brute-force references for every quantity the sketch engine
/// estimates. Desk-scale only; the walk oracle is capped at n = 500.

/// |N_u ∩ N_v|.
template <GraphLike G>
std::size_t exact_cn(const G& g, node_t u, node_t v) {
  auto a = g.neighbors(u), b = g.neighbors(v);
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else ++count, ++i, ++j;
  }
  return count;
}

/// Sum over common neighbors of 1/log(d_k). A degree-1 common neighbor is
/// impossible in a simple graph with u != v; if one shows up anyway
/// (corrupted input), the term is skipped and a warning is emitted.
template <GraphLike G>
double exact_aa(const G& g, node_t u, node_t v);

/// Sum over common neighbors of 1/d_k.
template <GraphLike G>
double exact_ra(const G& g, node_t u, node_t v) {
  auto a = g.neighbors(u), b = g.neighbors(v);
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      sum += 1.0 / static_cast<double>(g.degree(a[i]));
      ++i, ++j;
    }
  }
  return sum;
}

void log_warning(const std::string& message);

template <GraphLike G>
double exact_aa(const G& g, node_t u, node_t v) {
  auto a = g.neighbors(u), b = g.neighbors(v);
  std::size_t i = 0, j = 0;
  double sum = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else {
      std::size_t d = g.degree(a[i]);
      if (d <= 1) {
        log_warning("exact_aa: skipping common neighbor " +
                    std::to_string(a[i]) + " with degree " + std::to_string(d));
      } else {
        sum += 1.0 / std::log(static_cast<double>(d));
      }
      ++i, ++j;
    }
  }
  return sum;
}

/// |{k : SPD(u,k)=p and SPD(v,k)=q}| for p,q >= 1. The zero rows mirror the
/// subtraction form used by the estimator: count(0,q) = |N_v^q| minus the
/// counts at distances 1..r from u, i.e. nodes at distance q from v that are
/// farther than r (or unreachable) from u, plus u itself if SPD(u,v)=q.
/// Requires 0 <= p,q <= r and (p,q) != (0,0).
template <GraphLike G>
std::size_t exact_de_count(const G& g, const HopNeighborhoods& hops, node_t u,
                           node_t v, int p, int q) {
  const int r = hops.max_hop();
  if (p < 0 || q < 0 || p > r || q > r)
    throw std::invalid_argument("exact_de_count: hop out of range");
  if (p == 0 && q == 0)
    throw std::invalid_argument("exact_de_count: (0,0) is undefined");
  std::vector<int> du, dv;
  bfs_distances(g, u, r, du);
  bfs_distances(g, v, r, dv);
  if (p >= 1 && q >= 1) {
    std::size_t count = 0;
    for (node_t k : hops.set(u, p))
      if (dv[k] == q) ++count;
    return count;
  }
  if (p == 0) {
    std::size_t total = hops.set(v, q).size();
    for (node_t k : hops.set(v, q))
      if (du[k] >= 1 && du[k] <= r) --total;
    return total;
  }
  std::size_t total = hops.set(u, p).size();
  for (node_t k : hops.set(u, p))
    if (dv[k] >= 1 && dv[k] <= r) --total;
  return total;
}

/// (A^l)_{uv}: number of length-l walks between u and v. Dense matrix power
/// with overflow-checked 64-bit counts; capped at n = 500.
std::uint64_t exact_walk_count(const Graph& g, unsigned l, node_t u, node_t v);

/// Row u of A^l, same constraints as exact_walk_count.
std::vector<std::uint64_t> exact_walk_counts_from(const Graph& g, unsigned l,
                                                  node_t u);

/// Number of triangles containing u, by neighbor-pair enumeration.
std::uint64_t exact_triangles_at(const Graph& g, node_t u);

/// Arithmetic mean; the non-informative regression baseline.
double mean_baseline(std::span<const double> values);

}  // namespace qosketch
