#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace evcore {

// Mean categorical cross-entropy; probabilities are clamped at 1e-12.
double loss_cce(const Eigen::MatrixXd& probs, std::span<const std::size_t> labels);

// 1/2 (1 - cos). Zero-norm inputs have cosine 0, so distance 1/2.
double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Mean cosine distance over same-chain pairs; 0 when there are none.
double loss_attract(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains);

// 1 - mean cosine distance over different-chain pairs; 0 when there are none.
double loss_repulse(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains);

struct LossWeights {
  double cce = 1.0;
  double lambda1 = 0.0;  // attract
  double lambda2 = 0.0;  // repulse
};

struct LossBreakdown {
  double total = 0.0;
  double cce = 0.0;
  double attract = 0.0;
  double repulse = 0.0;
  LossWeights weights;
  std::size_t same_pairs = 0;
  std::size_t different_pairs = 0;
};

// Both CORE terms from a single Gram product of the row-normalized
// embeddings. When grad is non-null it receives d(w_a*attract + w_r*repulse)/dE.
struct PairwiseTerms {
  double attract = 0.0;
  double repulse = 0.0;
  std::size_t same_pairs = 0;
  std::size_t different_pairs = 0;
};

PairwiseTerms pairwise_terms(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains,
                             double attract_weight = 0.0, double repulse_weight = 0.0,
                             Eigen::MatrixXd* grad = nullptr);

// total = weights.cce * cce + lambda1 * attract + lambda2 * repulse.
LossBreakdown loss_total(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& embeddings,
                         std::span<const std::size_t> labels, std::span<const std::size_t> chains,
                         const LossWeights& weights);

// Loss together with its gradients with respect to the output logits (through
// the softmax) and the embedding activations.
struct LossGradients {
  LossBreakdown loss;
  Eigen::MatrixXd d_logits;
  Eigen::MatrixXd d_embeddings;
};

LossGradients loss_gradients(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& embeddings,
                             std::span<const std::size_t> labels, std::span<const std::size_t> chains,
                             const LossWeights& weights);

}  // namespace evcore
