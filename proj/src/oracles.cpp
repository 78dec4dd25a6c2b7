#include "qosketch/oracles.hpp"

#include <iostream>
#include <numeric>

namespace qosketch {

void log_warning(const std::string& message) {
  std::cerr << "[qosketch] warning: " << message << '\n';
}

namespace {

constexpr std::size_t kWalkOracleCap = 500;

void checked_add_mul(std::uint64_t& acc, std::uint64_t a, std::uint64_t b) {
  std::uint64_t prod;
  if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &acc))
    throw std::overflow_error("exact_walk_count: count overflow");
}

}  // namespace

std::vector<std::uint64_t> exact_walk_counts_from(const Graph& g, unsigned l,
                                                  node_t u) {
  const std::size_t n = g.num_nodes();
  if (n > kWalkOracleCap)
    throw std::invalid_argument("exact_walk_count: graph larger than oracle cap");
  // row_u(A^l) = row_u(A^{l-1}) * A
  std::vector<std::uint64_t> row(n, 0), next(n, 0);
  row[u] = 1;
  for (unsigned step = 0; step < l; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (node_t k = 0; k < n; ++k) {
      if (row[k] == 0) continue;
      for (node_t w : g.neighbors(k)) checked_add_mul(next[w], row[k], 1);
    }
    row.swap(next);
  }
  return row;
}

std::uint64_t exact_walk_count(const Graph& g, unsigned l, node_t u, node_t v) {
  return exact_walk_counts_from(g, l, u)[v];
}

std::uint64_t exact_triangles_at(const Graph& g, node_t u) {
  auto nbrs = g.neighbors(u);
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      if (g.has_edge(nbrs[i], nbrs[j])) ++count;
  return count;
}

double mean_baseline(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("mean_baseline: empty sequence");
  double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum / static_cast<double>(values.size());
}

}  // namespace qosketch
