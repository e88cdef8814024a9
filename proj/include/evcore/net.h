#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "evcore/loss.h"
#include "evcore/rng.h"

namespace evcore {

// Layer widths of the hourglass network: input -> hidden1 -> embedding ->
// hidden3 -> output (softmax over C+1 classes).
struct NetShape {
  std::size_t input = 0;
  std::size_t hidden1 = 1000;
  std::size_t embedding = 250;
  std::size_t hidden3 = 1000;
  std::size_t output = 0;

  bool operator==(const NetShape&) const = default;
};

// Weights are stored input-major: layer k maps rows x to x * w_k + b_k.
struct NetParams {
  Eigen::MatrixXd w1, w2, w3, w4;
  Eigen::RowVectorXd b1, b2, b3, b4;

  static NetParams zeros(const NetShape& shape);

  NetShape shape() const;
  std::size_t parameter_count() const;
  bool all_finite() const;

  // Visits the eight tensors in a fixed order (w1, b1, ..., w4, b4).
  void for_each(const std::function<void(Eigen::Ref<Eigen::MatrixXd>)>& fn);
  void for_each(const std::function<void(const Eigen::Ref<const Eigen::MatrixXd>&)>& fn) const;
};

// Glorot-uniform weights, zero biases.
NetParams init_params(const NetShape& shape, Rng& rng);

// Binary keep-masks (0/1) for the three hidden layers.
struct DropoutMasks {
  Eigen::MatrixXd hidden1, embedding, hidden3;
};

DropoutMasks sample_dropout_masks(std::size_t rows, const NetShape& shape, double rate, Rng& rng);

enum class Mode { kTrain, kInfer };

// Cached activations of one forward pass.
struct ForwardPass {
  Eigen::MatrixXd z1, a1, a1_out;    // pre-activation, ReLU, after dropout
  Eigen::MatrixXd z2, embeddings, e_out;
  Eigen::MatrixXd z3, a3, a3_out;
  Eigen::MatrixXd logits, probs;
};

// In train mode the masks are applied after each hidden layer with 1/(1-rate)
// scaling; embeddings are always taken before dropout.
ForwardPass forward(const NetParams& params, const Eigen::MatrixXd& inputs, Mode mode = Mode::kInfer,
                    const DropoutMasks* masks = nullptr, double dropout_rate = 0.0);

// Inference-mode embeddings.
Eigen::MatrixXd embed(const NetParams& params, const Eigen::MatrixXd& inputs);

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits);

// Backpropagates loss gradients through a cached pass.
NetParams backward(const NetParams& params, const Eigen::MatrixXd& inputs, const ForwardPass& pass,
                   const Eigen::MatrixXd& d_logits, const Eigen::MatrixXd& d_embeddings,
                   const DropoutMasks* masks = nullptr, double dropout_rate = 0.0);

struct Batch {
  Eigen::MatrixXd inputs;
  std::vector<std::size_t> labels;  // class in [0, C]
  std::vector<std::size_t> chains;  // gold chain; singletons keep distinct ids
  DropoutMasks masks;               // used when dropout_rate > 0
};

struct GradientResult {
  LossBreakdown loss;
  NetParams grads;
};

// Forward, loss, and backward for one batch.
GradientResult compute_gradients(const NetParams& params, const Batch& batch, const LossWeights& weights,
                                 double dropout_rate = 0.0);

// Loss only (same path as compute_gradients, no backward).
LossBreakdown evaluate_loss(const NetParams& params, const Batch& batch, const LossWeights& weights,
                            double dropout_rate = 0.0);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  NetParams m, v;
  std::uint64_t step = 0;

  static AdamState zeros(const NetShape& shape) { return AdamState{NetParams::zeros(shape), NetParams::zeros(shape), 0}; }
};

void adam_step(NetParams& params, AdamState& state, const NetParams& grads, double lr,
               const AdamConfig& config = {});

}  // namespace evcore
