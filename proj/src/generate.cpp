#include "qosketch/generate.hpp"

#include <unordered_set>

#include "qosketch/rng.hpp"

namespace qosketch {

Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi: bad p");
  std::vector<Edge> edges;
  for (node_t u = 0; u + 1 < n; ++u)
    for (node_t v = u + 1; v < n; ++v)
      if (rng::to_unit(rng::hash(seed, 0x4552ull, u, v)) < p)
        edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n * d % 2 != 0 || d >= n)
    throw std::invalid_argument("random_regular: need n*d even and d < n");
  // Pairing model: shuffle n*d stubs, pair them up, restart on self-loops
  // or duplicate edges.
  for (std::uint64_t attempt = 0;; ++attempt) {
    rng::Stream stream(seed, 0x52454755ull + attempt);
    std::vector<node_t> stubs(n * d);
    for (std::size_t i = 0; i < stubs.size(); ++i)
      stubs[i] = static_cast<node_t>(i / d);
    rng::shuffle<node_t>(stubs, stream);
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    edges.reserve(n * d / 2);
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      node_t a = stubs[i], b = stubs[i + 1];
      if (a == b) {
        ok = false;
        break;
      }
      Edge e = make_edge(a, b);
      std::uint64_t key = (static_cast<std::uint64_t>(e.first) << 32) | e.second;
      if (!seen.insert(key).second) {
        ok = false;
        break;
      }
      edges.push_back(e);
    }
    if (ok) return Graph::from_edges(n, std::move(edges));
    if (attempt > 10000)
      throw std::runtime_error("random_regular: pairing model failed to converge");
  }
}

Graph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || n < m + 1)
    throw std::invalid_argument("barabasi_albert: need 1 <= m < n");
  rng::Stream stream(seed, 0x42414C42ull);
  std::vector<Edge> edges;
  // Repeated-endpoint list: picking a uniform element is degree-proportional.
  std::vector<node_t> targets;
  // Seed clique on the first m+1 nodes.
  for (node_t u = 0; u <= m; ++u)
    for (node_t v = u + 1; v <= m; ++v) {
      edges.emplace_back(u, v);
      targets.push_back(u);
      targets.push_back(v);
    }
  std::vector<node_t> picked;
  for (node_t v = static_cast<node_t>(m + 1); v < n; ++v) {
    picked.clear();
    while (picked.size() < m) {
      node_t t = targets[stream.next_below(targets.size())];
      if (std::find(picked.begin(), picked.end(), t) == picked.end())
        picked.push_back(t);
    }
    for (node_t t : picked) {
      edges.emplace_back(t, v);
      targets.push_back(t);
      targets.push_back(v);
    }
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace qosketch
