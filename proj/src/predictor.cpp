#include "qosketch/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "qosketch/metrics.hpp"
#include "qosketch/rng.hpp"

namespace qosketch {

std::vector<std::pair<int, int>> FeatureConfig::label_layout() const {
  switch (hops) {
    case 1:
      return {{1, 1}, {1, 0}, {0, 1}};
    case 2:
      return {{1, 1}, {1, 2}, {2, 1}, {1, 0}, {0, 1}, {2, 2}, {2, 0}, {0, 2}};
    case 3:
      return {{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {1, 0}, {0, 1},
              {2, 2}, {2, 3}, {3, 2}, {2, 0}, {0, 2}, {3, 3}, {3, 0}, {0, 3}};
    default:
      throw std::invalid_argument("FeatureConfig: hops must be in 1..3");
  }
}

std::size_t FeatureConfig::dim() const {
  std::size_t d = label_layout().size();
  if (triangles) d += 1;
  if (node_features && !node_features->empty()) d += node_features->front().size();
  return d;
}

std::vector<std::string> FeatureConfig::names() const {
  std::vector<std::string> out;
  for (auto [p, q] : label_layout())
    out.push_back("count_" + std::to_string(p) + "_" + std::to_string(q));
  if (triangles) out.push_back("triangles_uv");
  if (node_features && !node_features->empty())
    for (std::size_t i = 0; i < node_features->front().size(); ++i)
      out.push_back("hadamard_" + std::to_string(i));
  return out;
}

namespace {

double dot_row(std::span<const sig_t> row, const std::vector<double>& vec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < vec.size(); ++i)
    acc += static_cast<double>(row[i]) * vec[i];
  return acc;
}

}  // namespace

std::vector<double> link_features(const SignatureMatrix& sig,
                                  const FeatureConfig& cfg, node_t u, node_t v,
                                  const NodeSketch& su, const NodeSketch& sv,
                                  FeatureGrad* grad) {
  const auto layout = cfg.label_layout();
  const int r = cfg.hops;
  std::vector<double> feat;
  feat.reserve(cfg.dim());

  // estimated #(p,q) for p,q >= 1, plus exact hop-set sizes for the zero rows
  std::vector<double> est((r + 1) * (r + 1), 0.0);
  auto idx = [r](int p, int q) { return p * (r + 1) + q; };
  for (int p = 1; p <= r; ++p)
    for (int q = 1; q <= r; ++q) {
      double acc = 0.0;
      const auto& a = su.eta[p - 1];
      const auto& b = sv.eta[q - 1];
      for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
      est[idx(p, q)] = acc;
    }
  for (int q = 1; q <= r; ++q) {
    double rest = 0.0;
    for (int s = 1; s <= r; ++s) rest += est[idx(s, q)];
    est[idx(0, q)] = static_cast<double>(sv.hop_sets[q - 1].size()) - rest;
  }
  for (int p = 1; p <= r; ++p) {
    double rest = 0.0;
    for (int s = 1; s <= r; ++s) rest += est[idx(p, s)];
    est[idx(p, 0)] = static_cast<double>(su.hop_sets[p - 1].size()) - rest;
  }
  for (auto [p, q] : layout) feat.push_back(est[idx(p, q)]);

  if (cfg.triangles) {
    double tri_u = 0.0, tri_v = 0.0;
    for (std::size_t i = 0; i < su.walk1.size(); ++i)
      tri_u += su.walk1[i] * su.walk2[i];
    for (std::size_t i = 0; i < sv.walk1.size(); ++i)
      tri_v += sv.walk1[i] * sv.walk2[i];
    feat.push_back(0.5 * tri_u + 0.5 * tri_v);
  }

  if (cfg.node_features && !cfg.node_features->empty()) {
    const auto& xu = (*cfg.node_features)[u];
    const auto& xv = (*cfg.node_features)[v];
    for (std::size_t i = 0; i < xu.size(); ++i) feat.push_back(xu[i] * xv[i]);
  }

  if (grad) {
    const std::size_t D = cfg.dim();
    auto row_of = [&](node_t k) -> std::vector<double>& {
      auto [it, inserted] = grad->by_node.try_emplace(k);
      if (inserted) it->second.assign(D, 0.0);
      return it->second;
    };
    // d est(p,q) / dw_k = [k in N_u^p] x_k . eta_v^q + [k in N_v^q] x_k . eta_u^p
    std::vector<std::vector<double>> dest((r + 1) * (r + 1));
    for (int p = 1; p <= r; ++p)
      for (node_t k : su.hop_sets[p - 1]) {
        auto& g = row_of(k);
        for (int q = 1; q <= r; ++q) {
          double d = dot_row(sig.row(k), sv.eta[q - 1]);
          // locate column of (p,q) and of the zero rows sharing p or q
          for (std::size_t c = 0; c < layout.size(); ++c) {
            if (layout[c] == std::make_pair(p, q)) g[c] += d;
            else if (layout[c] == std::make_pair(0, q)) g[c] -= d;
            else if (layout[c] == std::make_pair(p, 0)) g[c] -= d;
          }
        }
      }
    for (int q = 1; q <= r; ++q)
      for (node_t k : sv.hop_sets[q - 1]) {
        auto& g = row_of(k);
        for (int p = 1; p <= r; ++p) {
          double d = dot_row(sig.row(k), su.eta[p - 1]);
          for (std::size_t c = 0; c < layout.size(); ++c) {
            if (layout[c] == std::make_pair(p, q)) g[c] += d;
            else if (layout[c] == std::make_pair(0, q)) g[c] -= d;
            else if (layout[c] == std::make_pair(p, 0)) g[c] -= d;
          }
        }
      }
    if (cfg.triangles) {
      const std::size_t tri_col = layout.size();
      auto add_tri = [&](const NodeSketch& s) {
        if (!s.hop_sets.empty())
          for (node_t k : s.hop_sets[0]) {
            // k contributes w_k * x_k to walk1
            row_of(k)[tri_col] += 0.5 * dot_row(sig.row(k), s.walk2);
          }
        for (const auto& [k, c] : s.walk2_mult)
          row_of(k)[tri_col] += 0.5 * c * dot_row(sig.row(k), s.walk1);
      };
      add_tri(su);
      add_tri(sv);
    }
  }
  return feat;
}

namespace {

struct Standardizer {
  std::vector<double> mean, scale;

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = (x[i] - mean[i]) / scale[i];
    return out;
  }
};

Standardizer fit_standardizer(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.front().size();
  Standardizer s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < d; ++i) s.mean[i] += row[i];
  for (double& m : s.mean) m /= static_cast<double>(rows.size());
  std::vector<double> var(d, 0.0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < d; ++i) {
      double c = row[i] - s.mean[i];
      var[i] += c * c;
    }
  for (std::size_t i = 0; i < d; ++i) {
    double sd = std::sqrt(var[i] / static_cast<double>(rows.size()));
    s.scale[i] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

// Learned head evaluated per distinct degree; returns per-node weights and,
// on request, the forward caches needed for backprop grouped by degree.
std::vector<double> head_weights(const Graph& g, const Mlp& head,
                                 std::unordered_map<std::size_t, Mlp::Cache>* caches) {
  std::vector<double> w(g.num_nodes(), 1.0);
  std::unordered_map<std::size_t, double> by_degree;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    std::size_t d = g.degree(static_cast<node_t>(v));
    auto it = by_degree.find(d);
    if (it == by_degree.end()) {
      std::vector<double> in{static_cast<double>(d)};
      if (caches) {
        Mlp::Cache c;
        double out = head.forward(in, &c)[0];
        caches->emplace(d, std::move(c));
        it = by_degree.emplace(d, out).first;
      } else {
        it = by_degree.emplace(d, head.forward(in)[0]).first;
      }
    }
    w[v] = it->second;
  }
  return w;
}

}  // namespace

std::vector<double> predictor_node_weights(const Graph& observed,
                                           const ModelParams& params) {
  switch (params.rescale) {
    case RescaleMode::none:
      return std::vector<double>(observed.num_nodes(), 1.0);
    case RescaleMode::fixed_fn:
      return ra_weights(observed);
    case RescaleMode::learned:
      return head_weights(observed, params.rescale_head, nullptr);
  }
  throw std::logic_error("predictor_node_weights: bad mode");
}

BatchGradients finish_batch_gradients(const Graph& observed,
                                      const ModelParams& params,
                                      const std::vector<std::vector<double>>& feats,
                                      const std::vector<FeatureGrad>& fgrads,
                                      std::span<const double> labels) {
  if (feats.size() != labels.size())
    throw std::invalid_argument("finish_batch_gradients: label count mismatch");
  const bool learned = params.rescale == RescaleMode::learned;
  Standardizer standardizer{params.input_mean, params.input_scale};

  BatchGradients out;
  out.classifier = params.classifier.zero_gradients();
  out.rescale_head = params.rescale_head.zero_gradients();
  std::unordered_map<node_t, double> dloss_dw;
  const double inv_batch = 1.0 / static_cast<double>(feats.size());

  for (std::size_t i = 0; i < feats.size(); ++i) {
    Mlp::Cache cache;
    std::vector<double> x = standardizer.apply(feats[i]);
    double logit = params.classifier.forward(x, &cache)[0];
    out.logits.push_back(logit);
    out.loss += bce_loss(logit, labels[i]) * inv_batch;
    std::vector<double> dout{bce_dlogit(logit, labels[i]) * inv_batch};
    std::vector<double> dx = params.classifier.backward(cache, dout, out.classifier);
    if (learned) {
      for (const auto& [k, dfeat] : fgrads[i].by_node) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dx.size(); ++c)
          acc += dx[c] / params.input_scale[c] * dfeat[c];
        dloss_dw[k] += acc;
      }
    }
  }
  if (!std::isfinite(out.loss))
    throw std::runtime_error("finish_batch_gradients: loss is not finite");

  if (learned && !dloss_dw.empty()) {
    // w_k = f(d_k) is shared across equal-degree nodes; group before backprop
    std::unordered_map<std::size_t, double> by_degree;
    for (const auto& [k, g] : dloss_dw) by_degree[observed.degree(k)] += g;
    std::vector<std::pair<std::size_t, double>> ordered(by_degree.begin(),
                                                        by_degree.end());
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [deg, g] : ordered) {
      std::vector<double> in{static_cast<double>(deg)};
      Mlp::Cache cache;
      params.rescale_head.forward(in, &cache);
      std::vector<double> dout{g};
      params.rescale_head.backward(cache, dout, out.rescale_head);
    }
  }
  return out;
}

std::vector<double> score_links(const Graph& observed, const ModelParams& params,
                                const SketchConfig& sketch,
                                std::span<const Edge> links, unsigned threads) {
  SignatureMatrix sig = sample_signatures(sketch, observed);
  std::vector<double> weights = predictor_node_weights(observed, params);
  auto features = assemble_features(observed, sig, weights, params.features,
                                    links, threads);
  Standardizer std_{params.input_mean, params.input_scale};
  std::vector<double> probs(links.size());
  for (std::size_t i = 0; i < links.size(); ++i)
    probs[i] = sigmoid(params.classifier.forward(std_.apply(features[i]))[0]);
  return probs;
}

TrainResult train_predictor(const Graph& full, const Graph& observed,
                            const DatasetSplit& split, const TrainConfig& cfg) {
  if (split.train_pos.empty())
    throw std::invalid_argument("train_predictor: empty train split");
  FeatureConfig fcfg = cfg.features;
  fcfg.hops = cfg.sketch.hops;

  SignatureMatrix sig = sample_signatures(cfg.sketch, observed);

  ModelParams params;
  params.rescale = cfg.rescale;
  params.features = fcfg;
  params.classifier = Mlp({fcfg.dim(), cfg.hidden, 1});
  params.classifier.init_random(rng::hash(cfg.seed, 0x434C53ull));
  params.rescale_head = Mlp({1, cfg.rescale_hidden, 1});
  params.rescale_head.init_random(rng::hash(cfg.seed, 0x484541ull));
  // output exactly 1 at start: first-epoch features match unrescaled estimates
  for (double& x : params.rescale_head.weights(1)) x = 0.0;
  params.rescale_head.biases(1).assign(1, 1.0);

  auto node_weights = [&]() {
    return predictor_node_weights(observed, params);
  };

  // standardization constants from a fixed pre-training sample
  {
    std::vector<Edge> sample = split.train_pos;
    rng::Stream s(cfg.seed, 0x53544453ull);
    rng::shuffle<Edge>(sample, s);
    if (sample.size() > 2048) sample.resize(2048);
    std::vector<Edge> negs =
        sample_negative_edges(full, sample.size(), cfg.seed, 0x100);
    sample.insert(sample.end(), negs.begin(), negs.end());
    auto rows = assemble_features(observed, sig, node_weights(), fcfg, sample,
                                  cfg.threads);
    Standardizer st = fit_standardizer(rows);
    params.input_mean = st.mean;
    params.input_scale = st.scale;
  }
  Standardizer standardizer{params.input_mean, params.input_scale};

  Adam clf_opt(cfg.lr);
  Adam head_opt(cfg.lr);

  TrainResult result;
  result.params = params;
  double best_hits = -1.0;
  int since_best = 0;

  const std::size_t n_pos = split.train_pos.size();
  std::vector<std::size_t> order(n_pos);
  for (std::size_t i = 0; i < n_pos; ++i) order[i] = i;
  std::vector<std::vector<double>> eval_feats_cache;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng::Stream eps(cfg.seed, 0x45504F43ull + static_cast<std::uint64_t>(epoch));
    rng::shuffle<std::size_t>(order, eps);
    const std::size_t n_neg =
        static_cast<std::size_t>(cfg.negative_ratio * static_cast<double>(n_pos));
    std::vector<Edge> epoch_negs = sample_negative_edges(
        full, n_neg, cfg.seed, 0x200 + static_cast<std::uint64_t>(epoch));

    double epoch_loss = 0.0;
    std::size_t epoch_examples = 0;

    for (std::size_t start = 0; start < n_pos; start += cfg.batch_size) {
      const std::size_t stop = std::min(start + cfg.batch_size, n_pos);
      std::vector<Edge> batch_pos;
      batch_pos.reserve(stop - start);
      for (std::size_t i = start; i < stop; ++i)
        batch_pos.push_back(split.train_pos[order[i]]);
      std::vector<Edge> batch;
      std::vector<double> labels;
      for (const Edge& e : batch_pos) {
        batch.push_back(e);
        labels.push_back(1.0);
      }
      const std::size_t neg_begin =
          std::min(static_cast<std::size_t>(start * cfg.negative_ratio),
                   epoch_negs.size());
      const std::size_t neg_end =
          std::min(static_cast<std::size_t>(stop * cfg.negative_ratio),
                   epoch_negs.size());
      for (std::size_t i = neg_begin; i < neg_end; ++i) {
        batch.push_back(epoch_negs[i]);
        labels.push_back(0.0);
      }

      BatchGradients grads;
      try {
        if (cfg.shortcut_removal) {
          MaskedView view(observed, batch_pos);
          grads = predictor_batch_gradients(view, observed, sig, params, batch,
                                            labels, cfg.threads);
        } else {
          grads = predictor_batch_gradients(observed, observed, sig, params,
                                            batch, labels, cfg.threads);
        }
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("train_predictor: epoch " +
                                 std::to_string(epoch) + ": " + e.what());
      }
      epoch_loss += grads.loss * static_cast<double>(batch.size());
      epoch_examples += batch.size();

      clf_opt.step(params.classifier, grads.classifier);
      if (cfg.rescale == RescaleMode::learned)
        head_opt.step(params.rescale_head, grads.rescale_head);
    }

    result.history.train_loss.push_back(epoch_loss /
                                        static_cast<double>(epoch_examples));

    // validation Hits@k on the observed graph; features only depend on the
    // rescale head, so they are cached unless the head is learning
    std::vector<Edge> eval_links = split.valid_pos;
    eval_links.insert(eval_links.end(), split.valid_neg.begin(),
                      split.valid_neg.end());
    if (cfg.rescale == RescaleMode::learned || eval_feats_cache.empty()) {
      std::vector<double> weights = predictor_node_weights(observed, params);
      eval_feats_cache =
          assemble_features(observed, sig, weights, fcfg, eval_links, cfg.threads);
    }
    std::vector<double> pos_scores, neg_scores;
    for (std::size_t i = 0; i < eval_links.size(); ++i) {
      double p = sigmoid(
          params.classifier.forward(standardizer.apply(eval_feats_cache[i]))[0]);
      if (i < split.valid_pos.size()) pos_scores.push_back(p);
      else neg_scores.push_back(p);
    }
    const std::size_t k = std::min(cfg.eval_k, neg_scores.size());
    double hits = hits_at_k(pos_scores, neg_scores, k);
    result.history.valid_hits.push_back(hits);

    // ties keep the most recent (lowest-loss) params; patience counts only
    // epochs with no strict improvement
    if (hits >= best_hits) {
      best_hits = hits;
      result.history.best_epoch = epoch;
      result.params = params;
    }
    if (!result.history.valid_hits.empty() &&
        hits > (result.history.valid_hits.size() > 1
                    ? *std::max_element(result.history.valid_hits.begin(),
                                        result.history.valid_hits.end() - 1)
                    : -1.0)) {
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

}  // namespace qosketch
