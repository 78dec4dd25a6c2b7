#include <doctest.h>

#include <cmath>

#include "qosketch/generate.hpp"
#include "qosketch/oracles.hpp"
#include "qosketch/rng.hpp"
#include "qosketch/sketch.hpp"

using namespace qosketch;

namespace {

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }
Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (node_t l = 1; l <= leaves; ++l) edges.emplace_back(0, l);
  return Graph::from_edges(leaves + 1, std::move(edges));
}

SketchConfig orthonormal_cfg(const Graph& g) {
  SketchConfig cfg;
  cfg.hubs = g.num_nodes();
  cfg.dim = g.num_nodes() + 1;  // hubs must stay below dim
  return cfg;
}

double row_norm(std::span<const sig_t> row) {
  double acc = 0.0;
  for (sig_t x : row) acc += static_cast<double>(x) * x;
  return std::sqrt(acc);
}

struct MeanVar {
  double mean = 0.0, var = 0.0, se_mean = 0.0;
};

template <typename Fn>
MeanVar over_seeds(std::size_t seeds, Fn&& fn) {
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    double x = fn(s);
    sum += x;
    sum_sq += x * x;
  }
  MeanVar mv;
  const double n = static_cast<double>(seeds);
  mv.mean = sum / n;
  mv.var = (sum_sq - sum * sum / n) / (n - 1.0);
  mv.se_mean = std::sqrt(std::max(mv.var, 0.0) / n);
  return mv;
}

}  // namespace

TEST_CASE("hypercube signatures have +-1/2 entries at F=4 and unit norm") {
  Graph g = erdos_renyi(20, 0.2, 1);
  SketchConfig cfg;
  cfg.dim = 4;
  SignatureMatrix sig = sample_signatures(cfg, g);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    for (sig_t x : sig.row(v)) CHECK(std::abs(x) == doctest::Approx(0.5));
    CHECK(row_norm(sig.row(v)) == doctest::Approx(1.0));
  }
}

TEST_CASE("all-hub signatures form an orthonormal set") {
  Graph g = erdos_renyi(16, 0.3, 2);
  SignatureMatrix sig = sample_signatures(orthonormal_cfg(g), g);
  for (node_t u = 0; u < g.num_nodes(); ++u)
    for (node_t v = 0; v < g.num_nodes(); ++v) {
      double d = signature_dot(sig.row(u), sig.row(v));
      CHECK(d == (u == v ? 1.0 : 0.0));
    }
}

TEST_CASE("hub rows are one-hot in the reserved subspace, others zero there") {
  Graph g = star(9);  // node 0 is the clear top hub
  SketchConfig cfg;
  cfg.dim = 16;
  cfg.hubs = 2;  // center plus the lowest-id leaf on the degree tie
  SignatureMatrix sig = sample_signatures(cfg, g);
  auto hubs = select_hubs(g, 2);
  CHECK(hubs == std::vector<node_t>{0, 1});
  CHECK(sig.row(0)[14] == 1.0f);
  CHECK(sig.row(1)[15] == 1.0f);
  CHECK(row_norm(sig.row(0)) == doctest::Approx(1.0));
  // non-hub rows: zero on the reserved coordinates, +-1/sqrt(14) elsewhere
  for (node_t v = 2; v < g.num_nodes(); ++v) {
    CHECK(sig.row(v)[14] == 0.0f);
    CHECK(sig.row(v)[15] == 0.0f);
    CHECK(std::abs(sig.row(v)[0]) == doctest::Approx(1.0 / std::sqrt(14.0)));
    CHECK(signature_dot(sig.row(0), sig.row(v)) == 0.0);
  }
}

TEST_CASE("hubs beyond dim are a config error") {
  Graph g = erdos_renyi(10, 0.3, 3);
  SketchConfig cfg;
  cfg.dim = 8;
  cfg.hubs = 8;
  CHECK_THROWS_AS(sample_signatures(cfg, g), std::invalid_argument);
}

TEST_CASE("mean pairwise inner product of initial rows concentrates at zero") {
  Graph g = erdos_renyi(200, 0.02, 4);
  SketchConfig cfg;
  cfg.dim = 1024;
  cfg.seed = 5;
  SignatureMatrix sig = sample_signatures(cfg, g);
  rng::Stream pick(99);
  const std::size_t pairs = 10000;
  double sum = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    node_t u = static_cast<node_t>(pick.next_below(g.num_nodes()));
    node_t v = static_cast<node_t>(pick.next_below(g.num_nodes()));
    if (u == v) v = (v + 1) % g.num_nodes();
    sum += signature_dot(sig.row(u), sig.row(v));
  }
  double mean = sum / static_cast<double>(pairs);
  double bound = 3.0 / std::sqrt(1024.0 * static_cast<double>(pairs));
  CHECK(std::abs(mean) < bound);
}

TEST_CASE("signatures are reproducible per seed") {
  Graph g = erdos_renyi(30, 0.1, 6);
  SketchConfig cfg;
  cfg.dim = 64;
  cfg.seed = 42;
  SignatureMatrix a = sample_signatures(cfg, g);
  SignatureMatrix b = sample_signatures(cfg, g);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    auto ra = a.row(v), rb = b.row(v);
    CHECK(std::equal(ra.begin(), ra.end(), rb.begin()));
  }
}

TEST_CASE("rescale with unit weights is the identity") {
  Graph g = erdos_renyi(25, 0.15, 7);
  SketchConfig cfg;
  cfg.dim = 32;
  SignatureMatrix sig = sample_signatures(cfg, g);
  std::vector<double> ones(g.num_nodes(), 1.0);
  SignatureMatrix scaled = rescale_norms(sig, ones);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    auto a = sig.row(v), b = scaled.row(v);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("rescale rejects non-finite weights") {
  Graph g = path3();
  SketchConfig cfg;
  cfg.dim = 8;
  SignatureMatrix sig = sample_signatures(cfg, g);
  std::vector<double> bad{1.0, std::nan(""), 1.0};
  CHECK_THROWS_AS(rescale_norms(sig, bad), std::invalid_argument);
  std::vector<double> neg{1.0, -0.5, 1.0};
  CHECK_THROWS_AS(rescale_norms(sig, neg), std::invalid_argument);
}

TEST_CASE("walk propagation sums neighbor rows") {
  Graph g = path3();
  SketchConfig cfg;
  cfg.dim = 16;
  cfg.seed = 8;
  SignatureMatrix sig = sample_signatures(cfg, g);
  SignatureMatrix h1 = propagate_walk_step(sig, g);
  for (std::size_t i = 0; i < cfg.dim; ++i)
    CHECK(h1.row(1)[i] == sig.row(0)[i] + sig.row(2)[i]);
}

TEST_CASE("isolated nodes stay zero through propagation") {
  Graph g = Graph::from_edges(4, {{0, 1}});  // nodes 2,3 isolated
  SketchConfig cfg;
  cfg.dim = 32;
  SignatureMatrix sig = sample_signatures(cfg, g);
  PropagatedSignatures prop = propagate_walk(sig, g, 2);
  for (int l = 1; l <= 2; ++l)
    for (sig_t x : prop.walk_stages[l].row(2)) CHECK(x == 0.0f);
  CHECK(estimate_cn(prop, 2, 3) == 0.0);
  CHECK(estimate_triangles(prop, 2) == 0.0);
}

TEST_CASE("one-hot triangle counts common neighbors exactly") {
  Graph g = triangle();
  SignatureMatrix sig = sample_signatures(orthonormal_cfg(g), g);
  PropagatedSignatures prop = propagate_walk(sig, g, 1);
  CHECK(estimate_cn(prop, 0, 1) == 1.0);
}

TEST_CASE("hop stage 1 equals walk stage 1 bit for bit") {
  Graph g = erdos_renyi(40, 0.1, 9);
  SketchConfig cfg;
  cfg.dim = 64;
  cfg.seed = 10;
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures walk = propagate_walk(sig, g, 1);
  PropagatedSignatures hop = propagate_hops(sig, hops);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    auto a = walk.walk_stages[1].row(v);
    auto b = hop.hop_stages[0].row(v);
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST_CASE("hop stage 2 on a path picks up the far endpoint") {
  Graph g = path3();
  SketchConfig cfg;
  cfg.dim = 16;
  cfg.seed = 11;
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures prop = propagate_hops(sig, hops);
  auto eta2 = prop.hop_stages[1].row(0);
  auto c = sig.row(2);
  CHECK(std::equal(eta2.begin(), eta2.end(), c.begin()));
}

TEST_CASE("hop stage 2 vanishes on K3 and out-of-range hops throw") {
  Graph g = triangle();
  SketchConfig cfg;
  cfg.dim = 16;
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures prop = propagate_hops(sig, hops);
  for (node_t v = 0; v < 3; ++v)
    for (sig_t x : prop.hop_stages[1].row(v)) CHECK(x == 0.0f);
  CHECK_THROWS_AS(hops.set(0, 3), std::out_of_range);
}

TEST_CASE("zero-variance pair estimates exactly right for any seed") {
  // both endpoints' only neighbor is the shared center: d_u = d_v = CN = 1
  Graph g = star(2);
  for (std::uint64_t seed : {1ull, 2ull, 77ull}) {
    SketchConfig cfg;
    cfg.dim = 1024;  // 1/sqrt(F) exactly representable
    cfg.seed = seed;
    SignatureMatrix sig = sample_signatures(cfg, g);
    PropagatedSignatures prop = propagate_walk(sig, g, 1);
    CHECK(estimate_cn(prop, 1, 2) == 1.0);
  }
  CHECK(predicted_variance(1, 1, 1, 1024, 0.0) == 0.0);
}

TEST_CASE("dimension mismatch in the dot product is an error") {
  std::vector<sig_t> a(8, 1.0f), b(16, 1.0f);
  CHECK_THROWS_AS(signature_dot(a, b), std::invalid_argument);
}

TEST_CASE("stage-1 inner product is an unbiased common-neighbor estimator") {
  Graph g = erdos_renyi(100, 0.05, 13);
  const std::size_t seeds = 300;
  for (auto [u, v] : std::vector<Edge>{{0, 1}, {5, 50}, {20, 90}}) {
    auto mv = over_seeds(seeds, [&](std::size_t s) {
      SketchConfig cfg;
      cfg.dim = 1024;
      cfg.seed = rng::hash(100, s);
      SignatureMatrix sig = sample_signatures(cfg, g);
      PropagatedSignatures prop = propagate_walk(sig, g, 1);
      return estimate_cn(prop, u, v);
    });
    const double exact = static_cast<double>(exact_cn(g, u, v));
    CHECK(std::abs(mv.mean - exact) <= 3.0 * mv.se_mean + 1e-12);
  }
}

TEST_CASE("empirical variance tracks the closed form") {
  Graph g = erdos_renyi(100, 0.05, 14);
  node_t u = 0, v = 1;
  bool found = false;
  for (node_t a = 0; a < g.num_nodes() && !found; ++a)
    for (node_t b = a + 1; b < g.num_nodes() && !found; ++b)
      if (!g.has_edge(a, b) && exact_cn(g, a, b) >= 1) {
        u = a;
        v = b;
        found = true;
      }
  REQUIRE(found);
  const std::size_t seeds = 1500;
  auto mv = over_seeds(seeds, [&](std::size_t s) {
    SketchConfig cfg;
    cfg.dim = 1024;
    cfg.seed = rng::hash(200, s);
    SignatureMatrix sig = sample_signatures(cfg, g);
    PropagatedSignatures prop = propagate_walk(sig, g, 1);
    return estimate_cn(prop, u, v);
  });
  const double predicted = predicted_variance(
      static_cast<double>(g.degree(u)), static_cast<double>(g.degree(v)),
      static_cast<double>(exact_cn(g, u, v)), 1024.0, 0.0);
  CHECK(std::abs(mv.var - predicted) / predicted < 0.15);
}

TEST_CASE("gaussian signatures exercise the Var(x^2) variance term") {
  // star pair: d_u = d_v = cn = 1, so the hypercube variance is exactly 0
  // and everything observed comes from the F * var_x2 * cn term.
  Graph g = star(2);
  const std::size_t seeds = 1500;
  auto mv = over_seeds(seeds, [&](std::size_t s) {
    SketchConfig cfg;
    cfg.dim = 256;
    cfg.seed = rng::hash(300, s);
    cfg.distribution = SignatureDistribution::gaussian;
    SignatureMatrix sig = sample_signatures(cfg, g);
    PropagatedSignatures prop = propagate_walk(sig, g, 1);
    return estimate_cn(prop, 1, 2);
  });
  SketchConfig cfg;
  cfg.dim = 256;
  cfg.distribution = SignatureDistribution::gaussian;
  const double predicted =
      predicted_variance(1, 1, 1, 256.0, signature_var_x2(cfg));
  CHECK(mv.mean == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(mv.var - predicted) / predicted < 0.2);
}

TEST_CASE("rescaled estimators recover weighted counts: RA and AA") {
  Graph g = erdos_renyi(100, 0.05, 15);
  const std::size_t seeds = 250;
  std::vector<Edge> pairs{{2, 3}, {10, 60}, {33, 71}};
  for (bool use_ra : {true, false}) {
    std::vector<double> weights = use_ra ? ra_weights(g) : aa_weights(g);
    for (auto [u, v] : pairs) {
      auto mv = over_seeds(seeds, [&](std::size_t s) {
        SketchConfig cfg;
        cfg.dim = 1024;
        cfg.seed = rng::hash(use_ra ? 400 : 500, s);
        SignatureMatrix sig = sample_signatures(cfg, g);
        SignatureMatrix scaled = rescale_norms(sig, weights);
        PropagatedSignatures prop = propagate_walk(scaled, g, 1);
        return estimate_cn(prop, u, v);
      });
      const double exact = use_ra ? exact_ra(g, u, v) : exact_aa(g, u, v);
      CHECK(std::abs(mv.mean - exact) <= 3.0 * mv.se_mean + 1e-9);
    }
  }
}

TEST_CASE("label-count estimates are exact with an orthonormal basis") {
  Graph g = erdos_renyi(60, 0.06, 16);
  SketchConfig cfg = orthonormal_cfg(g);
  cfg.hops = 2;
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures prop = propagate_hops(sig, hops);
  for (auto [u, v] : std::vector<Edge>{{0, 1}, {4, 9}, {12, 40}}) {
    StructuralFeature feat = estimate_de_counts(prop, hops, u, v);
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q) {
        if (p == 0 && q == 0) continue;
        CHECK(feat.at(p, q) ==
              static_cast<double>(exact_de_count(g, hops, u, v, p, q)));
      }
  }
}

TEST_CASE("label-count estimates on the path with one-hot signatures") {
  Graph g = path3();
  SketchConfig cfg = orthonormal_cfg(g);
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures prop = propagate_hops(sig, hops);
  StructuralFeature feat = estimate_de_counts(prop, hops, 0, 2);
  CHECK(feat.at(1, 1) == 1.0);
  CHECK(feat.at(2, 2) == 0.0);
  CHECK_THROWS_AS(estimate_de_counts(prop, hops, 0, 0), std::invalid_argument);
}

TEST_CASE("label-count MSE shrinks as the dimension grows") {
  Graph g = erdos_renyi(60, 0.08, 17);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  std::vector<Edge> pairs;
  rng::Stream pick(3);
  while (pairs.size() < 20) {
    node_t u = static_cast<node_t>(pick.next_below(g.num_nodes()));
    node_t v = static_cast<node_t>(pick.next_below(g.num_nodes()));
    if (u != v) pairs.push_back(make_edge(u, v));
  }
  const std::size_t seeds = 40;
  auto mse_at = [&](std::size_t dim) {
    double err = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      SketchConfig cfg;
      cfg.dim = dim;
      cfg.seed = rng::hash(600, s);
      SignatureMatrix sig = sample_signatures(cfg, g);
      PropagatedSignatures prop = propagate_hops(sig, hops);
      for (auto [u, v] : pairs) {
        StructuralFeature feat = estimate_de_counts(prop, hops, u, v);
        double e = feat.at(1, 1) -
                   static_cast<double>(exact_de_count(g, hops, u, v, 1, 1));
        err += e * e;
      }
    }
    return err / static_cast<double>(seeds * pairs.size());
  };
  double coarse = mse_at(128), fine = mse_at(1024);
  CHECK(fine < coarse);
}

TEST_CASE("walk features: path pair at one hop each") {
  Graph g = path3();
  SignatureMatrix sig = sample_signatures(orthonormal_cfg(g), g);
  PropagatedSignatures prop = propagate_walk(sig, g, 2);
  CHECK(estimate_walk_features(prop, 0, 2, 1, 1) == 1.0);
  CHECK_THROWS_AS(estimate_walk_features(prop, 0, 2, 3, 1),
                  std::invalid_argument);
}

TEST_CASE("walk(1,1) coincides bit-for-bit with label count (1,1)") {
  Graph g = erdos_renyi(50, 0.08, 18);
  SketchConfig cfg;
  cfg.dim = 256;
  cfg.seed = 19;
  SignatureMatrix sig = sample_signatures(cfg, g);
  HopNeighborhoods hops = hop_neighborhoods(g, 2);
  PropagatedSignatures walk = propagate_walk(sig, g, 1);
  PropagatedSignatures hop = propagate_hops(sig, hops);
  for (auto [u, v] : std::vector<Edge>{{1, 2}, {7, 30}, {11, 44}}) {
    StructuralFeature feat = estimate_de_counts(hop, hops, u, v);
    CHECK(feat.at(1, 1) == estimate_walk_features(walk, u, v, 1, 1));
  }
}

TEST_CASE("walk features are unbiased for the walk-product oracle") {
  Graph g = erdos_renyi(20, 0.2, 20);
  const std::size_t seeds = 400;
  for (auto [u, v] : std::vector<Edge>{{0, 5}, {3, 11}}) {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}}) {
      auto mv = over_seeds(seeds, [&](std::size_t s) {
        SketchConfig cfg;
        cfg.dim = 512;
        cfg.seed = rng::hash(700, s);
        SignatureMatrix sig = sample_signatures(cfg, g);
        PropagatedSignatures prop = propagate_walk(sig, g, std::max(p, q));
        return estimate_walk_features(prop, u, v, p, q);
      });
      // sum_k (A^p)_{ku} (A^q)_{kv} = (A^{p+q})_{uv} for symmetric A
      const double exact =
          static_cast<double>(exact_walk_count(g, p + q, u, v));
      CHECK(std::abs(mv.mean - exact) <= 3.0 * mv.se_mean + 1e-9);
    }
  }
}

TEST_CASE("triangle estimates: exact in the orthonormal basis") {
  Graph k3 = triangle();
  SignatureMatrix sig = sample_signatures(orthonormal_cfg(k3), k3);
  PropagatedSignatures prop = propagate_walk(sig, k3, 2);
  CHECK(estimate_triangles(prop, 0) == 1.0);

  Graph s = star(5);
  SignatureMatrix ssig = sample_signatures(orthonormal_cfg(s), s);
  PropagatedSignatures sprop = propagate_walk(ssig, s, 2);
  for (node_t v = 0; v < s.num_nodes(); ++v)
    CHECK(estimate_triangles(sprop, v) == 0.0);

  Graph g = erdos_renyi(50, 0.1, 21);
  SignatureMatrix gsig = sample_signatures(orthonormal_cfg(g), g);
  PropagatedSignatures gprop = propagate_walk(gsig, g, 2);
  for (node_t v = 0; v < g.num_nodes(); ++v)
    CHECK(estimate_triangles(gprop, v) ==
          static_cast<double>(exact_triangles_at(g, v)));
}

TEST_CASE("triangle estimates are unbiased under hypercube sampling") {
  Graph g = star(4);
  const std::size_t seeds = 600;
  auto mv = over_seeds(seeds, [&](std::size_t s) {
    SketchConfig cfg;
    cfg.dim = 256;
    cfg.seed = rng::hash(800, s);
    SignatureMatrix sig = sample_signatures(cfg, g);
    PropagatedSignatures prop = propagate_walk(sig, g, 2);
    return estimate_triangles(prop, 1);
  });
  CHECK(std::abs(mv.mean) <= 3.0 * mv.se_mean + 1e-9);
}

TEST_CASE("predicted variance closed form") {
  CHECK(predicted_variance(3, 4, 2, 1024, 0.0) == doctest::Approx(0.01171875));
  CHECK(predicted_variance(1, 1, 1, 64, 0.0) == 0.0);
  CHECK(predicted_variance(5, 7, 0, 128, 0.0) == doctest::Approx(35.0 / 128.0));
}

TEST_CASE("rescaling a node by c scales its contribution by c^2") {
  // u - k - v: k is the single common neighbor
  Graph g = star(2);
  SketchConfig cfg;
  cfg.dim = 1024;
  cfg.seed = 22;
  SignatureMatrix sig = sample_signatures(cfg, g);
  for (double c : {0.5, 2.0, 3.0}) {
    std::vector<double> w(g.num_nodes(), 1.0);
    w[0] = c;  // center
    SignatureMatrix scaled = rescale_norms(sig, w);
    PropagatedSignatures prop = propagate_walk(scaled, g, 1);
    CHECK(estimate_cn(prop, 1, 2) == doctest::Approx(c * c));
  }
}
