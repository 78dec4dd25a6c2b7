#include "qosketch/probe.hpp"

#include <cmath>
#include <limits>

#include "qosketch/oracles.hpp"
#include "qosketch/parallel.hpp"
#include "qosketch/rng.hpp"

namespace qosketch {

namespace {

Matrix linear_map(const Matrix& agg, const Matrix& w) {
  if (w.cols != agg.cols)
    throw std::invalid_argument("layer: weight/input dimension mismatch");
  Matrix h(agg.rows, w.rows);
  for (std::size_t v = 0; v < agg.rows; ++v)
    for (std::size_t o = 0; o < w.rows; ++o) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w.cols; ++i)
        acc += w.at(o, i) * agg.at(v, i);
      h.at(v, o) = acc;
    }
  return h;
}

}  // namespace

Matrix gcn_layer(const Graph& g, const Matrix& x, const Matrix& w) {
  if (x.rows != g.num_nodes())
    throw std::invalid_argument("gcn_layer: row count != node count");
  Matrix agg(x.rows, x.cols);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    const double dv = static_cast<double>(g.degree(v)) + 1.0;
    auto add = [&](node_t k) {
      const double dk = static_cast<double>(g.degree(k)) + 1.0;
      const double c = 1.0 / std::sqrt(dk * dv);
      for (std::size_t i = 0; i < x.cols; ++i) agg.at(v, i) += c * x.at(k, i);
    };
    add(v);
    for (node_t k : g.neighbors(v)) add(k);
  }
  return linear_map(agg, w);
}

Matrix sage_layer(const Graph& g, const Matrix& x, const Matrix& w) {
  if (x.rows != g.num_nodes())
    throw std::invalid_argument("sage_layer: row count != node count");
  Matrix agg(x.rows, x.cols);
  for (node_t v = 0; v < g.num_nodes(); ++v) {
    const std::size_t d = g.degree(v);
    if (d == 0) continue;
    const double c = 1.0 / std::sqrt(static_cast<double>(d));
    for (node_t k : g.neighbors(v))
      for (std::size_t i = 0; i < x.cols; ++i) agg.at(v, i) += c * x.at(k, i);
  }
  return linear_map(agg, w);
}

double gcn_closed_form(const Graph& g, const ProbeConfig& cfg, node_t u, node_t v) {
  const double c = cfg.sigma_node * cfg.sigma_node * cfg.sigma_weight *
                   cfg.sigma_weight * static_cast<double>(cfg.dim) *
                   static_cast<double>(cfg.out_dim);
  const double du = static_cast<double>(g.degree(u)) + 1.0;
  const double dv = static_cast<double>(g.degree(v)) + 1.0;
  double sum = 0.0;
  auto nu = g.neighbors(u);
  auto nv = g.neighbors(v);
  std::size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i] < nv[j]) ++i;
    else if (nv[j] < nu[i]) ++j;
    else {
      sum += 1.0 / (static_cast<double>(g.degree(nu[i])) + 1.0);
      ++i, ++j;
    }
  }
  return c / std::sqrt(du * dv) * sum;
}

double sage_closed_form(const Graph& g, const ProbeConfig& cfg, node_t u, node_t v) {
  const double du = static_cast<double>(g.degree(u));
  const double dv = static_cast<double>(g.degree(v));
  if (du == 0.0 || dv == 0.0) return 0.0;
  const double c = cfg.sigma_node * cfg.sigma_node * cfg.sigma_weight *
                   cfg.sigma_weight * static_cast<double>(cfg.dim) *
                   static_cast<double>(cfg.out_dim);
  return c / std::sqrt(du * dv) * static_cast<double>(exact_cn(g, u, v));
}

std::vector<ProbeResult> probe_expectation(const ProbeConfig& cfg, const Graph& g,
                                           std::span<const Edge> pairs,
                                           unsigned threads) {
  cfg.validate();
  for (const Edge& e : pairs)
    if (g.has_edge(e.first, e.second))
      throw std::invalid_argument(
          "probe_expectation: pair is an edge; the closed form only covers "
          "non-adjacent pairs");

  const std::size_t n = g.num_nodes();
  const std::size_t P = pairs.size();

  struct Sums {
    std::vector<double> sum, sum_sq;
  };
  Sums total{std::vector<double>(P, 0.0), std::vector<double>(P, 0.0)};
  total = parallel_reduce<Sums>(
      cfg.trials, threads, total,
      [&](std::size_t begin, std::size_t end) {
        Sums acc{std::vector<double>(P, 0.0), std::vector<double>(P, 0.0)};
        Matrix x(n, cfg.dim), w(cfg.out_dim, cfg.dim);
        for (std::size_t trial = begin; trial < end; ++trial) {
          rng::Stream rs(cfg.seed, 0x50524F42ull + trial);
          for (double& e : x.data) e = cfg.sigma_node * rs.next_gaussian();
          for (double& e : w.data) e = cfg.sigma_weight * rs.next_gaussian();
          Matrix h = cfg.kind == ProbeKind::gcn ? gcn_layer(g, x, w)
                                                : sage_layer(g, x, w);
          for (std::size_t p = 0; p < P; ++p) {
            double dot = 0.0;
            for (std::size_t o = 0; o < cfg.out_dim; ++o)
              dot += h.at(pairs[p].first, o) * h.at(pairs[p].second, o);
            acc.sum[p] += dot;
            acc.sum_sq[p] += dot * dot;
          }
        }
        return acc;
      },
      [&](Sums a, const Sums& b) {
        for (std::size_t p = 0; p < P; ++p) {
          a.sum[p] += b.sum[p];
          a.sum_sq[p] += b.sum_sq[p];
        }
        return a;
      });

  std::vector<ProbeResult> results(P);
  const double t = static_cast<double>(cfg.trials);
  for (std::size_t p = 0; p < P; ++p) {
    ProbeResult& r = results[p];
    r.u = pairs[p].first;
    r.v = pairs[p].second;
    r.kind = cfg.kind;
    r.empirical_mean = total.sum[p] / t;
    double var = (total.sum_sq[p] - total.sum[p] * total.sum[p] / t) / (t - 1.0);
    r.std_error = std::sqrt(std::max(var, 0.0) / t);
    r.closed_form = cfg.kind == ProbeKind::gcn
                        ? gcn_closed_form(g, cfg, r.u, r.v)
                        : sage_closed_form(g, cfg, r.u, r.v);
    double diff = std::abs(r.empirical_mean - r.closed_form);
    if (r.std_error > 0.0) r.z_score = diff / r.std_error;
    else r.z_score = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return results;
}

ProbeResult probe_expectation(const ProbeConfig& cfg, const Graph& g, node_t u,
                              node_t v, unsigned threads) {
  Edge e{u, v};
  return probe_expectation(cfg, g, std::span<const Edge>(&e, 1), threads)[0];
}

}  // namespace qosketch
