#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qosketch {

/// Small fully-connected network: tanh on hidden layers, identity output.
/// Sizes {in, out} gives a plain linear/logistic model.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<std::size_t> sizes);

  const std::vector<std::size_t>& sizes() const { return sizes_; }
  std::size_t num_layers() const { return weights_.size(); }
  std::size_t input_dim() const { return sizes_.front(); }
  std::size_t output_dim() const { return sizes_.back(); }
  std::size_t num_params() const;

  /// layer weight matrix, row-major out x in.
  std::vector<double>& weights(std::size_t layer) { return weights_[layer]; }
  const std::vector<double>& weights(std::size_t layer) const { return weights_[layer]; }
  std::vector<double>& biases(std::size_t layer) { return biases_[layer]; }
  const std::vector<double>& biases(std::size_t layer) const { return biases_[layer]; }

  /// Deterministic scaled-uniform init (Glorot-style ranges).
  void init_random(std::uint64_t seed);
  /// Zero weights everywhere, zero biases except the final bias = value.
  /// The network then outputs exactly `value` for every input.
  void init_constant_output(double value);

  struct Cache {
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // post-activation; post[0] = input
  };

  std::vector<double> forward(std::span<const double> x, Cache* cache = nullptr) const;

  struct Gradients {
    std::vector<std::vector<double>> weights, biases;
    void accumulate(const Gradients& other, double scale = 1.0);
    void scale(double factor);
  };
  Gradients zero_gradients() const;

  /// Backprop of dL/doutput through the cached forward pass; accumulates
  /// parameter gradients into grads and returns dL/dinput.
  std::vector<double> backward(const Cache& cache, std::span<const double> d_out,
                               Gradients& grads) const;

  /// Flat parameter access for optimizers and serialization, layer by layer,
  /// weights then biases.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> flat);

 private:
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::vector<double>> biases_;
};

/// Numerically stable binary cross-entropy on a logit.
double bce_loss(double logit, double label);
/// dL/dlogit = sigmoid(logit) - label.
double bce_dlogit(double logit, double label);
double sigmoid(double logit);

/// Adaptive moment estimation over one Mlp's flattened parameters.
class Adam {
 public:
  explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(Mlp& mlp, const Mlp::Gradients& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace qosketch
