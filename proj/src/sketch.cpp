#include "qosketch/sketch.hpp"

#include <cmath>

#include "qosketch/rng.hpp"

namespace qosketch {

std::vector<node_t> select_hubs(const Graph& g, std::size_t b) {
  std::vector<node_t> order(g.num_nodes());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<node_t>(v);
  std::sort(order.begin(), order.end(), [&](node_t a, node_t c) {
    if (g.degree(a) != g.degree(c)) return g.degree(a) > g.degree(c);
    return a < c;
  });
  order.resize(b);
  return order;
}

SignatureMatrix sample_signatures(const SketchConfig& cfg, const Graph& g) {
  cfg.validate();
  if (cfg.hubs > g.num_nodes())
    throw std::invalid_argument("sample_signatures: more hubs than nodes");

  const std::size_t F = cfg.dim, b = cfg.hubs;
  const std::size_t free_dims = F - b;
  SignatureMatrix sig(g.num_nodes(), F, SignatureMatrix::Stage::initial);

  std::vector<std::uint32_t> hub_rank(g.num_nodes(), UINT32_MAX);
  std::vector<node_t> hubs = select_hubs(g, b);
  for (std::size_t i = 0; i < hubs.size(); ++i) hub_rank[hubs[i]] = i;

  const double scale = 1.0 / std::sqrt(static_cast<double>(free_dims));
  parallel_for(g.num_nodes(), 0, [&](std::size_t v) {
    auto row = sig.row(static_cast<node_t>(v));
    if (hub_rank[v] != UINT32_MAX) {
      row[free_dims + hub_rank[v]] = 1.0f;
      return;
    }
    if (cfg.distribution == SignatureDistribution::hypercube) {
      for (std::size_t i = 0; i < free_dims; ++i) {
        bool neg = rng::to_sign_bit(rng::hash(cfg.seed, v, i));
        row[i] = static_cast<sig_t>(neg ? -scale : scale);
      }
    } else {
      for (std::size_t i = 0; i < free_dims; ++i) {
        double z = rng::to_gaussian(rng::hash(cfg.seed, v, 2 * i),
                                    rng::hash(cfg.seed, v, 2 * i + 1));
        row[i] = static_cast<sig_t>(z * scale);
      }
    }
  });
  return sig;
}

SignatureMatrix rescale_norms(const SignatureMatrix& sig,
                              std::span<const double> weights) {
  if (weights.size() != sig.num_nodes())
    throw std::invalid_argument("rescale_norms: weight count mismatch");
  for (double w : weights)
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument("rescale_norms: weights must be finite and >= 0");
  SignatureMatrix out(sig.num_nodes(), sig.dim(),
                      SignatureMatrix::Stage::rescaled);
  parallel_for(sig.num_nodes(), 0, [&](std::size_t v) {
    auto src = sig.row(static_cast<node_t>(v));
    auto dst = out.row(static_cast<node_t>(v));
    const double w = weights[v];
    for (std::size_t i = 0; i < src.size(); ++i)
      dst[i] = static_cast<sig_t>(w * src[i]);
  });
  return out;
}

std::vector<double> ra_weights(const Graph& g) {
  std::vector<double> w(g.num_nodes());
  for (std::size_t v = 0; v < w.size(); ++v) {
    std::size_t d = g.degree(static_cast<node_t>(v));
    w[v] = d >= 1 ? 1.0 / std::sqrt(static_cast<double>(d)) : 0.0;
  }
  return w;
}

std::vector<double> aa_weights(const Graph& g) {
  std::vector<double> w(g.num_nodes());
  for (std::size_t v = 0; v < w.size(); ++v) {
    std::size_t d = g.degree(static_cast<node_t>(v));
    w[v] = d >= 2 ? 1.0 / std::sqrt(std::log(static_cast<double>(d))) : 0.0;
  }
  return w;
}

PropagatedSignatures propagate_hops(const SignatureMatrix& sig,
                                    const HopNeighborhoods& hops,
                                    unsigned threads) {
  if (hops.num_nodes() != sig.num_nodes())
    throw std::invalid_argument("propagate_hops: node count mismatch");
  PropagatedSignatures out;
  out.walk_stages.push_back(sig);  // stage 0 kept for the zero-row sizes
  for (int s = 1; s <= hops.max_hop(); ++s) {
    SignatureMatrix stage(sig.num_nodes(), sig.dim(),
                          SignatureMatrix::Stage::propagated, s);
    parallel_for(sig.num_nodes(), threads, [&](std::size_t v) {
      auto dst = stage.row(static_cast<node_t>(v));
      for (node_t k : hops.set(static_cast<node_t>(v), s)) {
        auto src = sig.row(k);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
      }
    });
    out.hop_stages.push_back(std::move(stage));
  }
  return out;
}

double signature_dot(std::span<const sig_t> a, std::span<const sig_t> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("signature_dot: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

double estimate_cn(const PropagatedSignatures& prop, node_t u, node_t v) {
  if (prop.max_walk() < 1)
    throw std::invalid_argument("estimate_cn: walk stage 1 not available");
  return signature_dot(prop.walk_stages[1].row(u), prop.walk_stages[1].row(v));
}

StructuralFeature estimate_de_counts(const PropagatedSignatures& prop,
                                     const HopNeighborhoods& hops, node_t u,
                                     node_t v) {
  const int r = hops.max_hop();
  if (r < 1) throw std::invalid_argument("estimate_de_counts: r must be >= 1");
  if (u == v) throw std::invalid_argument("estimate_de_counts: u == v");
  if (prop.max_hop() < r)
    throw std::invalid_argument("estimate_de_counts: missing hop stages");

  StructuralFeature feat;
  feat.r = r;
  feat.counts.assign(static_cast<std::size_t>(r + 1) * (r + 1), 0.0);
  for (int p = 1; p <= r; ++p)
    for (int q = 1; q <= r; ++q)
      feat.at(p, q) = signature_dot(prop.hop_stages[p - 1].row(u),
                                    prop.hop_stages[q - 1].row(v));
  for (int q = 1; q <= r; ++q) {
    double rest = 0.0;
    for (int s = 1; s <= r; ++s) rest += feat.at(s, q);
    feat.at(0, q) = static_cast<double>(hops.set(v, q).size()) - rest;
  }
  for (int p = 1; p <= r; ++p) {
    double rest = 0.0;
    for (int s = 1; s <= r; ++s) rest += feat.at(p, s);
    feat.at(p, 0) = static_cast<double>(hops.set(u, p).size()) - rest;
  }
  return feat;
}

double estimate_walk_features(const PropagatedSignatures& prop, node_t u,
                              node_t v, int p, int q) {
  if (p < 0 || q < 0 || prop.max_walk() < std::max(p, q))
    throw std::invalid_argument("estimate_walk_features: stage out of range");
  return signature_dot(prop.walk_stages[p].row(u), prop.walk_stages[q].row(v));
}

double estimate_triangles(const PropagatedSignatures& prop, node_t u) {
  if (prop.max_walk() < 2)
    throw std::invalid_argument("estimate_triangles: needs walk stages 1 and 2");
  return 0.5 *
         signature_dot(prop.walk_stages[1].row(u), prop.walk_stages[2].row(u));
}

double predicted_variance(double du, double dv, double cn, double dim,
                          double var_x2) {
  if (dim < 1) throw std::invalid_argument("predicted_variance: dim must be >= 1");
  return (du * dv + cn * cn - 2.0 * cn) / dim + dim * var_x2 * cn;
}

double signature_var_x2(const SketchConfig& cfg) {
  if (cfg.distribution == SignatureDistribution::hypercube) return 0.0;
  // x ~ N(0, 1/(F-b)): Var(x^2) = 2/(F-b)^2
  double f = static_cast<double>(cfg.dim - cfg.hubs);
  return 2.0 / (f * f);
}

}  // namespace qosketch
