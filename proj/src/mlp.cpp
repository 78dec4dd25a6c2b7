#include "qosketch/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "qosketch/rng.hpp"

namespace qosketch {

Mlp::Mlp(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.size() < 2)
    throw std::invalid_argument("Mlp: need at least input and output sizes");
  for (std::size_t s : sizes_)
    if (s == 0) throw std::invalid_argument("Mlp: zero-width layer");
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.emplace_back(sizes_[l + 1] * sizes_[l], 0.0);
    biases_.emplace_back(sizes_[l + 1], 0.0);
  }
}

std::size_t Mlp::num_params() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l)
    total += weights_[l].size() + biases_[l].size();
  return total;
}

void Mlp::init_random(std::uint64_t seed) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(sizes_[l] + sizes_[l + 1]));
    for (std::size_t i = 0; i < weights_[l].size(); ++i)
      weights_[l][i] = bound * (2.0 * rng::to_unit(rng::hash(seed, l, i)) - 1.0);
    for (double& b : biases_[l]) b = 0.0;
  }
}

void Mlp::init_constant_output(double value) {
  for (auto& w : weights_)
    for (double& x : w) x = 0.0;
  for (auto& b : biases_)
    for (double& x : b) x = 0.0;
  for (double& x : biases_.back()) x = value;
}

std::vector<double> Mlp::forward(std::span<const double> x, Cache* cache) const {
  if (x.size() != sizes_.front())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  std::vector<double> act(x.begin(), x.end());
  if (cache) {
    cache->pre.assign(num_layers(), {});
    cache->post.assign(num_layers() + 1, {});
    cache->post[0] = act;
  }
  for (std::size_t l = 0; l < num_layers(); ++l) {
    const std::size_t in = sizes_[l], out = sizes_[l + 1];
    std::vector<double> z(out);
    for (std::size_t o = 0; o < out; ++o) {
      double acc = biases_[l][o];
      const double* wrow = weights_[l].data() + o * in;
      for (std::size_t i = 0; i < in; ++i) acc += wrow[i] * act[i];
      z[o] = acc;
    }
    if (cache) cache->pre[l] = z;
    const bool hidden = l + 1 < num_layers();
    if (hidden)
      for (double& v : z) v = std::tanh(v);
    act = std::move(z);
    if (cache) cache->post[l + 1] = act;
  }
  return act;
}

Mlp::Gradients Mlp::zero_gradients() const {
  Gradients g;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    g.weights.emplace_back(weights_[l].size(), 0.0);
    g.biases.emplace_back(biases_[l].size(), 0.0);
  }
  return g;
}

void Mlp::Gradients::accumulate(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i)
      weights[l][i] += scale * other.weights[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i)
      biases[l][i] += scale * other.biases[l][i];
  }
}

void Mlp::Gradients::scale(double factor) {
  for (auto& w : weights)
    for (double& x : w) x *= factor;
  for (auto& b : biases)
    for (double& x : b) x *= factor;
}

std::vector<double> Mlp::backward(const Cache& cache, std::span<const double> d_out,
                                  Gradients& grads) const {
  std::vector<double> delta(d_out.begin(), d_out.end());
  for (std::size_t li = num_layers(); li-- > 0;) {
    const std::size_t in = sizes_[li], out = sizes_[li + 1];
    const bool hidden = li + 1 < num_layers();
    if (hidden) {
      // through tanh: post = tanh(pre); d/dpre = 1 - post^2
      for (std::size_t o = 0; o < out; ++o) {
        const double y = cache.post[li + 1][o];
        delta[o] *= 1.0 - y * y;
      }
    }
    const std::vector<double>& input = cache.post[li];
    for (std::size_t o = 0; o < out; ++o) {
      grads.biases[li][o] += delta[o];
      double* grow = grads.weights[li].data() + o * in;
      for (std::size_t i = 0; i < in; ++i) grow[i] += delta[o] * input[i];
    }
    std::vector<double> d_in(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      const double* wrow = weights_[li].data() + o * in;
      for (std::size_t i = 0; i < in; ++i) d_in[i] += wrow[i] * delta[o];
    }
    delta = std::move(d_in);
  }
  return delta;
}

std::vector<double> Mlp::flatten() const {
  std::vector<double> flat;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    flat.insert(flat.end(), weights_[l].begin(), weights_[l].end());
    flat.insert(flat.end(), biases_[l].begin(), biases_[l].end());
  }
  return flat;
}

void Mlp::unflatten(std::span<const double> flat) {
  std::size_t pos = 0;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    for (double& x : weights_[l]) x = flat[pos++];
    for (double& x : biases_[l]) x = flat[pos++];
  }
  if (pos != flat.size())
    throw std::invalid_argument("Mlp::unflatten: size mismatch");
}

double sigmoid(double logit) {
  if (logit >= 0.0) return 1.0 / (1.0 + std::exp(-logit));
  double e = std::exp(logit);
  return e / (1.0 + e);
}

double bce_loss(double logit, double label) {
  // log(1 + exp(-|z|)) + max(z,0) - z*y, stable for large |z|
  double max_part = logit > 0.0 ? logit : 0.0;
  return max_part - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

double bce_dlogit(double logit, double label) { return sigmoid(logit) - label; }

void Adam::step(Mlp& mlp, const Mlp::Gradients& grads) {
  std::vector<double> flat = mlp.flatten();
  std::vector<double> g;
  g.reserve(flat.size());
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    g.insert(g.end(), grads.weights[l].begin(), grads.weights[l].end());
    g.insert(g.end(), grads.biases[l].begin(), grads.biases[l].end());
  }
  if (g.size() != flat.size())
    throw std::invalid_argument("Adam: gradient shape mismatch");
  if (m_.empty()) {
    m_.assign(flat.size(), 0.0);
    v_.assign(flat.size(), 0.0);
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < flat.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g[i] * g[i];
    flat[i] -= lr_ * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + eps_);
  }
  mlp.unflatten(flat);
}

}  // namespace qosketch
