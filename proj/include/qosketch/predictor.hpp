#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qosketch/graph.hpp"
#include "qosketch/mlp.hpp"
#include "qosketch/sketch.hpp"

namespace qosketch {

/// Fixed per-link feature layout. For r=2 the estimated-label block is
/// [#(1,1), #(1,2), #(2,1), #(1,0), #(0,1), #(2,2), #(2,0), #(0,2)],
/// optionally followed by [#(tri_u) + #(tri_v)] and a Hadamard block of
/// externally supplied node features.
struct FeatureConfig {
  int hops = 2;
  bool triangles = false;
  const std::vector<std::vector<double>>* node_features = nullptr;

  std::vector<std::pair<int, int>> label_layout() const;
  std::size_t dim() const;
  std::vector<std::string> names() const;
};

/// Per-node aggregation state reused across the links of one batch.
struct NodeSketch {
  std::vector<std::vector<node_t>> hop_sets;    // [s-1] = N_v^s on the view
  std::vector<std::vector<double>> eta;         // [s-1] = sum of weighted rows
  std::vector<double> walk1, walk2;             // only when triangles are on
  std::vector<std::pair<node_t, double>> walk2_mult;  // k -> 2-walk count, grads only
};

/// Sparse d(feature)/d(node weight) rows for one link.
struct FeatureGrad {
  std::unordered_map<node_t, std::vector<double>> by_node;
};

template <GraphLike G>
NodeSketch compute_node_sketch(const G& view, const SignatureMatrix& sig,
                               std::span<const double> node_weights, node_t v,
                               const FeatureConfig& cfg, bool want_grad);

/// Features of one link from the two endpoint sketches. When grad is non-null
/// it is filled with d(feature)/d(weight_k) for every contributing node.
std::vector<double> link_features(const SignatureMatrix& sig,
                                  const FeatureConfig& cfg, node_t u, node_t v,
                                  const NodeSketch& su, const NodeSketch& sv,
                                  FeatureGrad* grad = nullptr);

/// Batched assembly on an arbitrary view; sketches for distinct endpoints are
/// computed once and shared. Throws if any feature is non-finite.
template <GraphLike G>
std::vector<std::vector<double>> assemble_features(
    const G& view, const SignatureMatrix& sig,
    std::span<const double> node_weights, const FeatureConfig& cfg,
    std::span<const Edge> links, unsigned threads = 0,
    std::vector<FeatureGrad>* grads = nullptr);

struct TrainConfig {
  SketchConfig sketch;
  FeatureConfig features;
  std::size_t batch_size = 512;
  int epochs = 50;
  double lr = 1e-3;
  double negative_ratio = 1.0;
  std::uint64_t seed = 0;
  bool shortcut_removal = true;
  int patience = 20;
  std::size_t hidden = 16;
  std::size_t rescale_hidden = 32;
  RescaleMode rescale = RescaleMode::none;
  std::size_t eval_k = 50;
  unsigned threads = 0;
};

struct ModelParams {
  Mlp classifier;
  Mlp rescale_head;  // f: [degree] -> scalar, active when rescale == learned
  RescaleMode rescale = RescaleMode::none;
  FeatureConfig features;
  std::vector<double> input_mean, input_scale;  // frozen standardization

  std::size_t num_params() const {
    return classifier.num_params() +
           (rescale == RescaleMode::learned ? rescale_head.num_params() : 0);
  }
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> valid_hits;
  int best_epoch = -1;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

/// Trains the structural-feature classifier with per-batch shortcut removal.
/// `full` is the complete graph (negative-sampling rejection); `observed`
/// carries train edges only and is what features are computed on.
TrainResult train_predictor(const Graph& full, const Graph& observed,
                            const DatasetSplit& split, const TrainConfig& cfg);

/// Per-node rescale weights under the given mode (1s, 1/sqrt(d), or f(d)).
std::vector<double> predictor_node_weights(const Graph& observed,
                                           const ModelParams& params);

/// Mean BCE loss and parameter gradients for one batch of labeled links.
/// Gradients flow through every estimate term, including the subtraction
/// rows, into the rescale head when it is active.
struct BatchGradients {
  double loss = 0.0;
  Mlp::Gradients classifier;
  Mlp::Gradients rescale_head;
  std::vector<double> logits;
};

/// Core of the gradient computation, shared by training and the gradient
/// checks: features (and their per-node weight sensitivities, when the head
/// is learned) are already assembled on whatever view the batch uses.
BatchGradients finish_batch_gradients(const Graph& observed,
                                      const ModelParams& params,
                                      const std::vector<std::vector<double>>& feats,
                                      const std::vector<FeatureGrad>& fgrads,
                                      std::span<const double> labels);

template <GraphLike G>
BatchGradients predictor_batch_gradients(const G& view, const Graph& observed,
                                         const SignatureMatrix& sig,
                                         const ModelParams& params,
                                         std::span<const Edge> links,
                                         std::span<const double> labels,
                                         unsigned threads = 0) {
  const bool learned = params.rescale == RescaleMode::learned;
  std::vector<double> weights = predictor_node_weights(observed, params);
  std::vector<FeatureGrad> fgrads;
  auto feats = assemble_features(view, sig, weights, params.features, links,
                                 threads, learned ? &fgrads : nullptr);
  return finish_batch_gradients(observed, params, feats, fgrads, labels);
}

/// Link probabilities on the observed graph (no masking).
std::vector<double> score_links(const Graph& observed, const ModelParams& params,
                                const SketchConfig& sketch,
                                std::span<const Edge> links,
                                unsigned threads = 0);

// ---- templates ----

template <GraphLike G>
NodeSketch compute_node_sketch(const G& view, const SignatureMatrix& sig,
                               std::span<const double> node_weights, node_t v,
                               const FeatureConfig& cfg, bool want_grad) {
  const std::size_t F = sig.dim();
  NodeSketch s;
  s.hop_sets = local_hop_sets(view, v, cfg.hops);
  s.eta.assign(cfg.hops, std::vector<double>(F, 0.0));
  for (int hop = 1; hop <= cfg.hops; ++hop) {
    auto& dst = s.eta[hop - 1];
    for (node_t k : s.hop_sets[hop - 1]) {
      const double w = node_weights[k];
      auto row = sig.row(k);
      for (std::size_t i = 0; i < F; ++i) dst[i] += w * row[i];
    }
  }
  if (cfg.triangles) {
    s.walk1.assign(F, 0.0);
    for (node_t k : view.neighbors(v)) {
      const double w = node_weights[k];
      auto row = sig.row(k);
      for (std::size_t i = 0; i < F; ++i) s.walk1[i] += w * row[i];
    }
    s.walk2.assign(F, 0.0);
    std::unordered_map<node_t, double> mult;
    for (node_t j : view.neighbors(v))
      for (node_t k : view.neighbors(j)) mult[k] += 1.0;
    for (const auto& [k, c] : mult) {
      const double w = node_weights[k];
      auto row = sig.row(k);
      for (std::size_t i = 0; i < F; ++i) s.walk2[i] += c * w * row[i];
    }
    if (want_grad) {
      s.walk2_mult.assign(mult.begin(), mult.end());
      std::sort(s.walk2_mult.begin(), s.walk2_mult.end());
    }
  }
  return s;
}

template <GraphLike G>
std::vector<std::vector<double>> assemble_features(
    const G& view, const SignatureMatrix& sig,
    std::span<const double> node_weights, const FeatureConfig& cfg,
    std::span<const Edge> links, unsigned threads,
    std::vector<FeatureGrad>* grads) {
  // distinct endpoints, then per-endpoint sketches in parallel
  std::vector<node_t> endpoints;
  endpoints.reserve(links.size() * 2);
  for (const Edge& e : links) {
    endpoints.push_back(e.first);
    endpoints.push_back(e.second);
  }
  std::sort(endpoints.begin(), endpoints.end());
  endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());

  std::unordered_map<node_t, std::size_t> slot;
  slot.reserve(endpoints.size());
  for (std::size_t i = 0; i < endpoints.size(); ++i) slot.emplace(endpoints[i], i);

  std::vector<NodeSketch> sketches(endpoints.size());
  const bool want_grad = grads != nullptr;
  parallel_for(endpoints.size(), threads, [&](std::size_t i) {
    sketches[i] = compute_node_sketch(view, sig, node_weights, endpoints[i], cfg,
                                      want_grad);
  });

  std::vector<std::vector<double>> features(links.size());
  if (grads) grads->assign(links.size(), {});
  parallel_for(links.size(), threads, [&](std::size_t i) {
    const auto& su = sketches[slot.at(links[i].first)];
    const auto& sv = sketches[slot.at(links[i].second)];
    features[i] = link_features(sig, cfg, links[i].first, links[i].second, su, sv,
                                grads ? &(*grads)[i] : nullptr);
  });
  for (std::size_t i = 0; i < features.size(); ++i)
    for (double x : features[i])
      if (!std::isfinite(x))
        throw std::runtime_error("assemble_features: non-finite feature for link " +
                                 std::to_string(links[i].first) + "-" +
                                 std::to_string(links[i].second));
  return features;
}

}  // namespace qosketch
