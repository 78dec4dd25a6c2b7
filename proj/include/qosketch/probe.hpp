#pragma once

#include <cstdint>
#include <vector>

#include "qosketch/graph.hpp"

namespace qosketch {

/// Monte-Carlo check that a 1-layer, randomly initialized GCN/SAGE produces
/// pairwise inner products matching the closed-form expectation.

enum class ProbeKind { gcn, sage };

struct ProbeConfig {
  std::size_t dim = 8;        // F: input width
  std::size_t out_dim = 8;    // F': output width
  double sigma_node = 1.0;    // std of input entries
  double sigma_weight = 1.0;  // std of weight entries
  std::size_t trials = 10000;
  ProbeKind kind = ProbeKind::gcn;
  std::uint64_t seed = 0;

  void validate() const {
    if (dim < 1 || out_dim < 1 || sigma_node <= 0.0 || sigma_weight <= 0.0)
      throw std::invalid_argument("ProbeConfig: dimensions and sigmas must be positive");
    if (trials < 100)
      throw std::invalid_argument("ProbeConfig: trials must be >= 100");
  }
};

/// Small dense row-major matrix; enough for the probe's needs.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// h_u = W * sum_{k in N(u) ∪ {u}} X_k / sqrt((d_k+1)(d_u+1)).
Matrix gcn_layer(const Graph& g, const Matrix& x, const Matrix& w);

/// h_u = W * (1/sqrt(d_u)) * sum_{k in N(u)} X_k. No self term. The 1/sqrt(d)
/// normalization is the aggregator variant whose expected pairwise inner
/// product carries the 1/sqrt(d_u d_v) factor of the closed form.
Matrix sage_layer(const Graph& g, const Matrix& x, const Matrix& w);

double gcn_closed_form(const Graph& g, const ProbeConfig& cfg, node_t u, node_t v);
double sage_closed_form(const Graph& g, const ProbeConfig& cfg, node_t u, node_t v);

struct ProbeResult {
  node_t u = 0, v = 0;
  ProbeKind kind = ProbeKind::gcn;
  double empirical_mean = 0.0;
  double closed_form = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
};

/// Runs cfg.trials fresh (X, W) draws and compares the empirical mean of
/// h_u . h_v against the closed form for every requested pair. Pairs must be
/// non-adjacent (the closed form's domain).
std::vector<ProbeResult> probe_expectation(const ProbeConfig& cfg, const Graph& g,
                                           std::span<const Edge> pairs,
                                           unsigned threads = 0);

ProbeResult probe_expectation(const ProbeConfig& cfg, const Graph& g, node_t u,
                              node_t v, unsigned threads = 0);

}  // namespace qosketch
