#include "qosketch/bench.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "qosketch/metrics.hpp"
#include "qosketch/oracles.hpp"
#include "qosketch/rng.hpp"

namespace qosketch {

std::vector<EstimationRow> estimation_benchmark(
    const Graph& g, std::span<const SketchConfig> sweep,
    std::span<const Edge> pairs, std::size_t seeds, unsigned threads) {
  if (pairs.empty() || seeds == 0)
    throw std::invalid_argument("estimation_benchmark: need pairs and seeds");

  std::vector<EstimationRow> rows;
  for (const SketchConfig& base : sweep) {
    const int r = base.hops;
    HopNeighborhoods hops = hop_neighborhoods(g, r, threads);

    // exact counts once per sweep entry
    std::vector<std::vector<double>> exact(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
      exact[i].assign((r + 1) * (r + 1), 0.0);
      for (int p = 0; p <= r; ++p)
        for (int q = 0; q <= r; ++q) {
          if (p == 0 && q == 0) continue;
          exact[i][p * (r + 1) + q] = static_cast<double>(
              exact_de_count(g, hops, pairs[i].first, pairs[i].second, p, q));
        }
    });

    std::vector<double> sq_err((r + 1) * (r + 1), 0.0);
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t s = 0; s < seeds; ++s) {
      SketchConfig cfg = base;
      cfg.seed = rng::hash(base.seed, 0x42454E43ull, s);
      SignatureMatrix sig = sample_signatures(cfg, g);
      PropagatedSignatures prop = propagate_hops(sig, hops, threads);
      std::vector<std::vector<double>> errs(pairs.size());
      parallel_for(pairs.size(), threads, [&](std::size_t i) {
        StructuralFeature feat =
            estimate_de_counts(prop, hops, pairs[i].first, pairs[i].second);
        errs[i].assign((r + 1) * (r + 1), 0.0);
        for (int p = 0; p <= r; ++p)
          for (int q = 0; q <= r; ++q) {
            if (p == 0 && q == 0) continue;
            double e = feat.at(p, q) - exact[i][p * (r + 1) + q];
            errs[i][p * (r + 1) + q] = e * e;
          }
      });
      for (const auto& e : errs)
        for (std::size_t c = 0; c < sq_err.size(); ++c) sq_err[c] += e[c];
    }
    auto t1 = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    const double denom = static_cast<double>(seeds * pairs.size());
    for (int p = 0; p <= r; ++p)
      for (int q = 0; q <= r; ++q) {
        if (p == 0 && q == 0) continue;
        EstimationRow row;
        row.p = p;
        row.q = q;
        row.dim = base.dim;
        row.hubs = base.hubs;
        row.mse = sq_err[p * (r + 1) + q] / denom;
        row.wall_ms = wall_ms;
        rows.push_back(row);
      }
  }
  return rows;
}

double triangle_normalized_mse(const Graph& g, const SketchConfig& cfg,
                               std::size_t seeds, unsigned threads) {
  const std::size_t n = g.num_nodes();
  std::vector<double> truth(n);
  parallel_for(n, threads, [&](std::size_t v) {
    truth[v] = static_cast<double>(exact_triangles_at(g, static_cast<node_t>(v)));
  });
  double mean_truth = 0.0;
  for (double t : truth) mean_truth += t;
  mean_truth /= static_cast<double>(n);
  double var_truth = 0.0;
  for (double t : truth) var_truth += (t - mean_truth) * (t - mean_truth);
  var_truth /= static_cast<double>(n);
  if (var_truth == 0.0)
    throw std::invalid_argument(
        "triangle_normalized_mse: ground truth has zero variance");

  std::vector<double> mean_est(n, 0.0);
  for (std::size_t s = 0; s < seeds; ++s) {
    SketchConfig c = cfg;
    c.seed = rng::hash(cfg.seed, 0x545249ull, s);
    SignatureMatrix sig = sample_signatures(c, g);
    PropagatedSignatures prop = propagate_walk(sig, g, 2, threads);
    std::vector<double> est(n);
    parallel_for(n, threads, [&](std::size_t v) {
      est[v] = estimate_triangles(prop, static_cast<node_t>(v));
    });
    for (std::size_t v = 0; v < n; ++v) mean_est[v] += est[v];
  }
  double mse = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    double e = mean_est[v] / static_cast<double>(seeds) - truth[v];
    mse += e * e;
  }
  mse /= static_cast<double>(n);
  return mse / var_truth;
}

std::vector<double> heuristic_scores(const Graph& observed, BenchModel model,
                                     std::span<const Edge> links) {
  std::vector<double> scores(links.size());
  parallel_for(links.size(), 0, [&](std::size_t i) {
    switch (model) {
      case BenchModel::cn:
        scores[i] = static_cast<double>(
            exact_cn(observed, links[i].first, links[i].second));
        break;
      case BenchModel::aa:
        scores[i] = exact_aa(observed, links[i].first, links[i].second);
        break;
      case BenchModel::ra:
        scores[i] = exact_ra(observed, links[i].first, links[i].second);
        break;
      default:
        throw std::invalid_argument("heuristic_scores: not a heuristic model");
    }
  });
  return scores;
}

namespace {

std::string model_name(BenchModel m) {
  switch (m) {
    case BenchModel::cn: return "cn";
    case BenchModel::aa: return "aa";
    case BenchModel::ra: return "ra";
    case BenchModel::structural: return "structural";
  }
  return "?";
}

}  // namespace

BenchmarkSummary run_benchmark(const Graph& g, const std::string& dataset_name,
                               const BenchConfig& cfg, unsigned threads) {
  BenchmarkSummary summary;
  summary.dataset = dataset_name;
  summary.model = model_name(cfg.model);
  summary.metric = "hits@" + std::to_string(cfg.k);

  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    const std::uint64_t split_seed = rng::hash(cfg.base_seed, 0x52455053ull, rep);
    DatasetSplit split = split_edges(g, split_seed);
    Graph observed = observed_graph(g, split);

    std::vector<Edge> links = split.test_pos;
    links.insert(links.end(), split.test_neg.begin(), split.test_neg.end());

    std::vector<double> scores;
    if (cfg.model == BenchModel::structural) {
      TrainConfig tc = cfg.train;
      tc.seed = rng::hash(cfg.base_seed, 0x54524Eull, rep);
      tc.sketch.seed = rng::hash(tc.seed, 0x534B45ull);
      tc.threads = threads;
      TrainResult trained = train_predictor(g, observed, split, tc);
      scores = score_links(observed, trained.params, tc.sketch, links, threads);
    } else {
      scores = heuristic_scores(observed, cfg.model, links);
    }

    std::span<const double> pos(scores.data(), split.test_pos.size());
    std::span<const double> neg(scores.data() + split.test_pos.size(),
                                split.test_neg.size());
    const std::size_t k = std::min(cfg.k, neg.size());
    summary.per_repeat.push_back(hits_at_k(pos, neg, k));
  }

  double mean = 0.0;
  for (double v : summary.per_repeat) mean += v;
  mean /= static_cast<double>(summary.per_repeat.size());
  double var = 0.0;
  for (double v : summary.per_repeat) var += (v - mean) * (v - mean);
  var /= static_cast<double>(summary.per_repeat.size());
  summary.mean = mean;
  summary.stddev = std::sqrt(var);

  std::ostringstream cfg_text;
  cfg_text << summary.dataset << '|' << summary.model << '|' << cfg.repeats
           << '|' << cfg.base_seed << '|' << cfg.k;
  summary.config_hash = std::to_string(rng::hash(0x434647ull,
      std::hash<std::string>{}(cfg_text.str())));
  return summary;
}

std::string estimation_report_csv(std::span<const EstimationRow> rows) {
  std::ostringstream out;
  out << "p,q,dim,hubs,mse,wall_ms\n";
  for (const auto& r : rows)
    out << r.p << ',' << r.q << ',' << r.dim << ',' << r.hubs << ','
        << r.mse << ',' << r.wall_ms << '\n';
  return out.str();
}

std::string summary_csv(const BenchmarkSummary& s) {
  std::ostringstream out;
  out << "dataset,model,metric,repeat,value\n";
  for (std::size_t i = 0; i < s.per_repeat.size(); ++i)
    out << s.dataset << ',' << s.model << ',' << s.metric << ',' << i << ','
        << s.per_repeat[i] << '\n';
  return out.str();
}

std::string summary_json(const BenchmarkSummary& s) {
  nlohmann::json j{{"dataset", s.dataset}, {"model", s.model},
                   {"metric", s.metric},   {"mean", s.mean},
                   {"std", s.stddev},      {"per_repeat", s.per_repeat},
                   {"config_hash", s.config_hash}};
  return j.dump(2);
}

}  // namespace qosketch
