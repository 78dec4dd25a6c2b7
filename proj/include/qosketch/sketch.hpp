#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qosketch/graph.hpp"

namespace qosketch {

/// Signature entries are stored as float; all accumulation happens in double.
using sig_t = float;

enum class SignatureDistribution {
  hypercube,  // entries +-1/sqrt(F-b); Var(x^2) = 0
  gaussian,   // test-only: entries N(0, 1/(F-b)); exercises the Var(x^2) term
};

enum class RescaleMode { none, fixed_fn, learned };

struct SketchConfig {
  std::size_t dim = 1024;     // F
  std::size_t hubs = 0;       // b: one-hot hub count, 0 disables
  int hops = 2;               // r
  std::uint64_t seed = 0;
  SignatureDistribution distribution = SignatureDistribution::hypercube;

  void validate() const {
    if (dim < 1) throw std::invalid_argument("SketchConfig: dim must be >= 1");
    if (hubs >= dim) throw std::invalid_argument("SketchConfig: hubs must be < dim");
    if (hops < 1 || hops > 3)
      throw std::invalid_argument("SketchConfig: hops must be in 1..3");
  }
};

/// Per-node F-dimensional real signatures.
class SignatureMatrix {
 public:
  enum class Stage { initial, rescaled, propagated };

  SignatureMatrix() = default;
  SignatureMatrix(std::size_t num_nodes, std::size_t dim, Stage stage,
                  int step = 0)
      : n_(num_nodes), dim_(dim), stage_(stage), step_(step),
        data_(num_nodes * dim, 0.0f) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t dim() const { return dim_; }
  Stage stage() const { return stage_; }
  int step() const { return step_; }

  std::span<const sig_t> row(node_t v) const {
    return {data_.data() + static_cast<std::size_t>(v) * dim_, dim_};
  }
  std::span<sig_t> row(node_t v) {
    return {data_.data() + static_cast<std::size_t>(v) * dim_, dim_};
  }

 private:
  std::size_t n_ = 0, dim_ = 0;
  Stage stage_ = Stage::initial;
  int step_ = 0;
  std::vector<sig_t> data_;
};

/// Top-b nodes by degree (ties by ascending id), in hub-rank order.
std::vector<node_t> select_hubs(const Graph& g, std::size_t b);

/// Initial quasi-orthogonal signatures: the b highest-degree nodes get
/// distinct one-hot coordinates in the reserved trailing subspace; everyone
/// else draws +-1/sqrt(F-b) entries in the leading F-b coordinates. Every
/// value is a pure function of (seed, node, coordinate).
SignatureMatrix sample_signatures(const SketchConfig& cfg, const Graph& g);

/// Multiplies row k by weights[k]. Weights must be finite and non-negative.
SignatureMatrix rescale_norms(const SignatureMatrix& sig,
                              std::span<const double> weights);

/// Fixed weight functions of degree. Nodes whose weight would be undefined
/// (degree 0 for the 1/sqrt(d) family, degree <= 1 for the log family) get
/// weight 0: such nodes can never be common neighbors of a distinct pair, so
/// zeroing them changes no expectation, only noise.
std::vector<double> ra_weights(const Graph& g);
std::vector<double> aa_weights(const Graph& g);

/// Walk stages h^(0..l) and hop stages eta^(1..r).
struct PropagatedSignatures {
  std::vector<SignatureMatrix> walk_stages;  // [l] = h^(l)
  std::vector<SignatureMatrix> hop_stages;   // [s-1] = eta^(s)

  int max_walk() const { return static_cast<int>(walk_stages.size()) - 1; }
  int max_hop() const { return static_cast<int>(hop_stages.size()); }
};

/// One round of neighbor-sum (no self term).
template <GraphLike G>
SignatureMatrix propagate_walk_step(const SignatureMatrix& sig, const G& g,
                                    unsigned threads = 0) {
  SignatureMatrix out(sig.num_nodes(), sig.dim(),
                      SignatureMatrix::Stage::propagated, sig.step() + 1);
  parallel_for(sig.num_nodes(), threads, [&](std::size_t v) {
    auto dst = out.row(static_cast<node_t>(v));
    for (node_t u : g.neighbors(static_cast<node_t>(v))) {
      auto src = sig.row(u);
      for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    }
  });
  return out;
}

/// steps rounds of neighbor-sum; keeps every intermediate stage.
template <GraphLike G>
PropagatedSignatures propagate_walk(const SignatureMatrix& sig, const G& g,
                                    int steps, unsigned threads = 0) {
  if (steps < 1) throw std::invalid_argument("propagate_walk: steps must be >= 1");
  PropagatedSignatures out;
  out.walk_stages.push_back(sig);
  for (int l = 1; l <= steps; ++l)
    out.walk_stages.push_back(
        propagate_walk_step(out.walk_stages.back(), g, threads));
  return out;
}

/// Hop stage s sums initial (or rescaled) signatures over the exact
/// distance-s neighborhoods. Aggregates at most one signature per node.
PropagatedSignatures propagate_hops(const SignatureMatrix& sig,
                                    const HopNeighborhoods& hops,
                                    unsigned threads = 0);

/// Inner product with double accumulation. Throws on dimension mismatch.
double signature_dot(std::span<const sig_t> a, std::span<const sig_t> b);

/// Unbiased estimator of |N_u ∩ N_v|: inner product of walk-stage-1 rows.
double estimate_cn(const PropagatedSignatures& prop, node_t u, node_t v);

/// Estimated label counts #(p,q) for all p,q in 0..r, (0,0) excluded.
/// Estimates are raw inner products and may be slightly negative.
struct StructuralFeature {
  int r = 0;
  std::vector<double> counts;  // indexed p*(r+1)+q
  std::optional<std::pair<double, double>> triangles;

  double at(int p, int q) const { return counts[p * (r + 1) + q]; }
  double& at(int p, int q) { return counts[p * (r + 1) + q]; }
};

/// #(p,q) = eta_u^(p) . eta_v^(q) for p,q >= 1; the zero rows subtract the
/// estimated 1..r counts from the exact hop-set size, so they inherit
/// estimator noise.
StructuralFeature estimate_de_counts(const PropagatedSignatures& prop,
                                     const HopNeighborhoods& hops, node_t u,
                                     node_t v);

/// Walk-level feature h^(p)_u . h^(q)_v: unbiased for
/// sum_k |walks^p(k,u)| * |walks^q(k,v)|.
double estimate_walk_features(const PropagatedSignatures& prop, node_t u,
                              node_t v, int p, int q);

/// Unbiased estimator of the number of triangles containing u:
/// half the inner product of the walk-1 and walk-2 stages at u.
double estimate_triangles(const PropagatedSignatures& prop, node_t u);

/// Closed-form variance of the stage-1 inner product:
/// (du*dv + cn^2 - 2cn)/F + F*var_x2*cn. Hypercube sampling has var_x2 = 0.
double predicted_variance(double du, double dv, double cn, double dim,
                          double var_x2);

/// Var(x^2) for the configured distribution (0 for hypercube).
double signature_var_x2(const SketchConfig& cfg);

}  // namespace qosketch
