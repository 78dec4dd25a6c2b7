#include <doctest.h>

#include <cmath>

#include "qosketch/generate.hpp"
#include "qosketch/probe.hpp"

using namespace qosketch;

namespace {

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("gcn layer: symmetric-normalized sum with self loop") {
  Graph g = path3();
  Matrix x = identity(3);
  Matrix w = identity(3);
  Matrix h = gcn_layer(g, x, w);
  // degrees+1: node0 -> 2, node1 -> 3, node2 -> 2
  CHECK(h.at(1, 0) == doctest::Approx(1.0 / std::sqrt(3.0 * 2.0)));
  CHECK(h.at(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(h.at(1, 2) == doctest::Approx(1.0 / std::sqrt(3.0 * 2.0)));
  CHECK(h.at(0, 2) == 0.0);
}

TEST_CASE("gcn layer: zero input gives zero output") {
  Graph g = path3();
  Matrix x(3, 4);
  Matrix w(2, 4);
  for (double& e : w.data) e = 0.7;
  Matrix h = gcn_layer(g, x, w);
  for (double e : h.data) CHECK(e == 0.0);
}

TEST_CASE("sage layer: degree-normalized neighbor sum, no self term") {
  Graph g = path3();
  Matrix x = identity(3);
  Matrix w = identity(3);
  Matrix h = sage_layer(g, x, w);
  // node 1 aggregates nodes 0 and 2 with coefficient 1/sqrt(2)
  CHECK(h.at(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(h.at(1, 1) == 0.0);
  CHECK(h.at(1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  // endpoints aggregate only the middle node
  CHECK(h.at(0, 1) == doctest::Approx(1.0));
  CHECK(h.at(0, 0) == 0.0);
}

TEST_CASE("sage layer: isolated node maps to zero") {
  Graph g = Graph::from_edges(3, {{0, 1}});
  Matrix x(3, 2);
  for (double& e : x.data) e = 1.0;
  Matrix w = identity(2);
  Matrix h = sage_layer(g, x, w);
  CHECK(h.at(2, 0) == 0.0);
  CHECK(h.at(2, 1) == 0.0);
}

TEST_CASE("probe closed forms on the path pair") {
  Graph g = path3();
  ProbeConfig cfg;
  cfg.dim = 64;
  cfg.out_dim = 64;
  // C = 64*64 = 4096, d^_a = d^_c = 2, d^_b = 3
  CHECK(gcn_closed_form(g, cfg, 0, 2) == doctest::Approx(4096.0 / 6.0));
  // d_a = d_c = 1, CN = 1
  CHECK(sage_closed_form(g, cfg, 0, 2) == doctest::Approx(4096.0));
}

TEST_CASE("probe rejects adjacent pairs and tiny trial counts") {
  Graph g = path3();
  ProbeConfig cfg;
  CHECK_THROWS_AS(probe_expectation(cfg, g, 0, 1), std::invalid_argument);
  cfg.trials = 10;
  CHECK_THROWS_AS(probe_expectation(cfg, g, 0, 2), std::invalid_argument);
}

TEST_CASE("probe matches the closed form on the path pair") {
  Graph g = path3();
  ProbeConfig cfg;
  cfg.trials = 20000;
  cfg.seed = 3;
  for (ProbeKind kind : {ProbeKind::gcn, ProbeKind::sage}) {
    cfg.kind = kind;
    ProbeResult r = probe_expectation(cfg, g, 0, 2);
    CHECK(r.z_score < 4.0);
    CHECK(r.closed_form > 0.0);
  }
}

TEST_CASE("probe: zero common neighbors means zero expectation") {
  // two disjoint edges: pair (0,2) shares nothing
  Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
  ProbeConfig cfg;
  cfg.trials = 5000;
  cfg.seed = 4;
  for (ProbeKind kind : {ProbeKind::gcn, ProbeKind::sage}) {
    cfg.kind = kind;
    ProbeResult r = probe_expectation(cfg, g, 0, 2);
    CHECK(r.closed_form == 0.0);
    CHECK(r.z_score < 4.0);
  }
}

TEST_CASE("probe z-scores stay small across a random graph") {
  Graph g = erdos_renyi(30, 0.12, 9);
  std::vector<Edge> pairs;
  for (node_t u = 0; u < g.num_nodes() && pairs.size() < 12; ++u)
    for (node_t v = u + 1; v < g.num_nodes() && pairs.size() < 12; ++v)
      if (!g.has_edge(u, v)) pairs.emplace_back(u, v);
  ProbeConfig cfg;
  cfg.trials = 8000;
  cfg.seed = 5;
  for (ProbeKind kind : {ProbeKind::gcn, ProbeKind::sage}) {
    cfg.kind = kind;
    auto results = probe_expectation(cfg, g, pairs);
    for (const auto& r : results) CHECK(r.z_score < 4.5);
  }
}

TEST_CASE("gcn closed form is degree-sensitive through common neighbors") {
  // u - k - v plus pendants attached to k change only 1/(d_k+1)
  auto build = [](std::size_t pendants) {
    std::vector<Edge> edges{{0, 1}, {1, 2}};
    node_t next = 3;
    for (std::size_t i = 0; i < pendants; ++i) edges.emplace_back(1, next++);
    return Graph::from_edges(3 + pendants, std::move(edges));
  };
  ProbeConfig cfg;
  Graph base = build(0), extended = build(2);
  double f0 = gcn_closed_form(base, cfg, 0, 2);
  double f2 = gcn_closed_form(extended, cfg, 0, 2);
  // d^_k goes from 3 to 5; endpoint degrees unchanged
  CHECK(f2 / f0 == doctest::Approx(3.0 / 5.0));
}
