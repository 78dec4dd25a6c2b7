#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qosketch/graph.hpp"
#include "qosketch/predictor.hpp"
#include "qosketch/sketch.hpp"

namespace qosketch {

struct EstimationRow {
  int p = 0, q = 0;
  std::size_t dim = 0, hubs = 0;
  double mse = 0.0;
  double wall_ms = 0.0;
};

/// MSE of the estimated label counts against the exact oracle, per (p,q) and
/// per sketch configuration, averaged over `seeds` signature draws on the
/// given pairs.
std::vector<EstimationRow> estimation_benchmark(
    const Graph& g, std::span<const SketchConfig> sweep,
    std::span<const Edge> pairs, std::size_t seeds, unsigned threads = 0);

/// MSE of the seed-averaged triangle estimate against the exact count,
/// normalized by the variance of the ground-truth per-node counts.
double triangle_normalized_mse(const Graph& g, const SketchConfig& cfg,
                               std::size_t seeds, unsigned threads = 0);

enum class BenchModel { cn, aa, ra, structural };

struct BenchConfig {
  BenchModel model = BenchModel::cn;
  std::size_t repeats = 10;
  std::uint64_t base_seed = 1;
  std::size_t k = 50;  // Hits@k
  TrainConfig train;   // used when model == structural
};

struct BenchmarkSummary {
  std::string dataset;
  std::string model;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> per_repeat;
  std::string config_hash;
};

/// Repeated random splits of one graph; per repeat the model is trained (or
/// the heuristic scored) on the observed graph and measured on the test set.
BenchmarkSummary run_benchmark(const Graph& g, const std::string& dataset_name,
                               const BenchConfig& cfg, unsigned threads = 0);

/// Heuristic scores on the observed graph for arbitrary links.
std::vector<double> heuristic_scores(const Graph& observed, BenchModel model,
                                     std::span<const Edge> links);

std::string estimation_report_csv(std::span<const EstimationRow> rows);
std::string summary_csv(const BenchmarkSummary& summary);
std::string summary_json(const BenchmarkSummary& summary);

}  // namespace qosketch
