#include <doctest.h>

#include <cmath>

#include "qosketch/generate.hpp"
#include "qosketch/oracles.hpp"

using namespace qosketch;

namespace {

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (node_t l = 1; l <= leaves; ++l) edges.emplace_back(0, l);
  return Graph::from_edges(leaves + 1, std::move(edges));
}

Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (node_t u = 0; u < n; ++u)
    for (node_t v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace

TEST_CASE("common-neighbor style heuristics on small graphs") {
  Graph k3 = triangle();
  CHECK(exact_cn(k3, 0, 1) == 1);
  CHECK(exact_ra(k3, 0, 1) == doctest::Approx(0.5));

  Graph s = star(5);
  // two leaves share only the center, whose degree is 5
  CHECK(exact_cn(s, 1, 2) == 1);
  CHECK(exact_ra(s, 1, 2) == doctest::Approx(1.0 / 5.0));
  CHECK(exact_aa(s, 1, 2) == doctest::Approx(1.0 / std::log(5.0)));

  // disjoint pair
  Graph two = Graph::from_edges(4, {{0, 1}, {2, 3}});
  CHECK(exact_cn(two, 0, 2) == 0);
  CHECK(exact_aa(two, 0, 2) == 0.0);
  CHECK(exact_ra(two, 0, 2) == 0.0);
}

TEST_CASE("aa skips degree-1 common neighbors instead of dividing by log 1") {
  // self-pair: neighbors of the center include degree-1 leaves
  Graph s = star(3);
  double aa = exact_aa(s, 0, 0);
  CHECK(std::isfinite(aa));
  CHECK(aa == 0.0);
}

TEST_CASE("distance-encoding counts on paths and triangles") {
  Graph k3 = triangle();
  HopNeighborhoods hops3 = hop_neighborhoods(k3, 2);
  CHECK(exact_de_count(k3, hops3, 0, 1, 1, 1) == 1);

  Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  HopNeighborhoods hopsp = hop_neighborhoods(p3, 2);
  CHECK(exact_de_count(p3, hopsp, 0, 2, 1, 1) == 1);  // node 1
  CHECK_THROWS_AS(exact_de_count(p3, hopsp, 0, 2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(exact_de_count(p3, hopsp, 0, 2, 0, 0), std::invalid_argument);
}

TEST_CASE("distance-encoding counts match a double-BFS brute force") {
  Graph g = erdos_renyi(50, 0.08, 21);
  const int r = 2;
  HopNeighborhoods hops = hop_neighborhoods(g, r);
  for (auto [u, v] : std::vector<Edge>{{0, 1}, {3, 17}, {8, 42}, {25, 49}}) {
    std::vector<int> du, dv;
    bfs_distances(g, u, -1, du);
    bfs_distances(g, v, -1, dv);
    for (int p = 0; p <= r; ++p)
      for (int q = 0; q <= r; ++q) {
        if (p == 0 && q == 0) continue;
        std::size_t brute = 0;
        for (node_t k = 0; k < g.num_nodes(); ++k) {
          const int a = du[k] < 0 ? 1 << 20 : du[k];
          const int b = dv[k] < 0 ? 1 << 20 : dv[k];
          if (p >= 1 && q >= 1 && a == p && b == q) ++brute;
          // zero rows: exact distance on one side, outside 1..r on the
          // other (distance 0 counts as outside)
          if (p == 0 && b == q && (a == 0 || a > r)) ++brute;
          if (q == 0 && a == p && (b == 0 || b > r)) ++brute;
        }
        CHECK(exact_de_count(g, hops, u, v, p, q) == brute);
      }
  }
}

TEST_CASE("de(1,1) equals the common-neighbor count everywhere") {
  Graph g = erdos_renyi(40, 0.1, 5);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  for (node_t u = 0; u < g.num_nodes(); ++u)
    for (node_t v = u + 1; v < g.num_nodes(); ++v)
      CHECK(exact_de_count(g, hops, u, v, 1, 1) == exact_cn(g, u, v));
}

TEST_CASE("walk counts on paths and triangles") {
  Graph p3 = Graph::from_edges(3, {{0, 1}, {1, 2}});
  CHECK(exact_walk_count(p3, 2, 0, 2) == 1);
  Graph k3 = triangle();
  CHECK(exact_walk_count(k3, 2, 0, 0) == 2);  // via each of the two neighbors
  CHECK(exact_walk_count(k3, 0, 0, 0) == 1);
  CHECK(exact_walk_count(k3, 0, 0, 1) == 0);
}

TEST_CASE("walk counts match naive repeated multiplication") {
  Graph g = erdos_renyi(20, 0.2, 33);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(n, 0));
  for (node_t u = 0; u < n; ++u)
    for (node_t w : g.neighbors(u)) a[u][w] = 1;
  std::vector<std::vector<std::uint64_t>> power = a;
  for (unsigned l = 2; l <= 4; ++l) {
    std::vector<std::vector<std::uint64_t>> next(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (power[i][k])
          for (std::size_t j = 0; j < n; ++j) next[i][j] += power[i][k] * a[k][j];
    power = next;
    for (node_t u = 0; u < n; ++u)
      for (node_t v = 0; v < n; ++v)
        CHECK(exact_walk_count(g, l, u, v) == power[u][v]);
  }
}

TEST_CASE("edge indicator: one length-1 walk iff adjacent") {
  Graph g = erdos_renyi(30, 0.15, 12);
  for (node_t u = 0; u < g.num_nodes(); ++u)
    for (node_t v = 0; v < g.num_nodes(); ++v)
      CHECK((exact_walk_count(g, 1, u, v) == 1) == g.has_edge(u, v));
}

TEST_CASE("walk oracle rejects oversized graphs") {
  Graph g = erdos_renyi(501, 0.005, 3);
  CHECK_THROWS_AS(exact_walk_count(g, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("triangle counts on canonical graphs") {
  Graph k3 = triangle();
  for (node_t v = 0; v < 3; ++v) CHECK(exact_triangles_at(k3, v) == 1);
  Graph s = star(6);
  for (node_t v = 0; v < s.num_nodes(); ++v) CHECK(exact_triangles_at(s, v) == 0);
  Graph k4 = complete(4);
  for (node_t v = 0; v < 4; ++v) CHECK(exact_triangles_at(k4, v) == 3);
}

TEST_CASE("triangle counts equal half the length-3 closed walks") {
  Graph g = erdos_renyi(60, 0.1, 14);
  for (node_t u = 0; u < g.num_nodes(); ++u)
    CHECK(2 * exact_triangles_at(g, u) == exact_walk_count(g, 3, u, u));
}

TEST_CASE("mean baseline") {
  std::vector<double> v{1.0, 2.0, 3.0};
  CHECK(mean_baseline(v) == doctest::Approx(2.0));
  std::vector<double> zeros{0.0, 0.0};
  CHECK(mean_baseline(zeros) == 0.0);
  std::vector<double> constant(17, 4.25);
  CHECK(mean_baseline(constant) == doctest::Approx(4.25));
  std::vector<double> empty;
  CHECK_THROWS_AS(mean_baseline(empty), std::invalid_argument);
}
