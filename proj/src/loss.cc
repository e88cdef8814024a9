#include "evcore/loss.h"

#include <algorithm>
#include <cmath>

#include "evcore/errors.h"

namespace evcore {

namespace {

constexpr double kProbFloor = 1e-12;

void check_rows(Eigen::Index rows, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(rows) != n) {
    throw ShapeError(std::string(what) + ": " + std::to_string(rows) + " rows but " + std::to_string(n) + " labels");
  }
}

}  // namespace

double loss_cce(const Eigen::MatrixXd& probs, std::span<const std::size_t> labels) {
  check_rows(probs.rows(), labels.size(), "loss_cce");
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum -= std::log(std::max(probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels[i])), kProbFloor));
  }
  return sum / static_cast<double>(labels.size());
}

double cosine_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  const double cos = (na == 0.0 || nb == 0.0) ? 0.0 : a.dot(b) / (na * nb);
  return 0.5 * (1.0 - cos);
}

PairwiseTerms pairwise_terms(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains,
                             double attract_weight, double repulse_weight, Eigen::MatrixXd* grad) {
  check_rows(embeddings.rows(), chains.size(), "pairwise_terms");
  const Eigen::Index n = embeddings.rows();
  const Eigen::VectorXd norms = embeddings.rowwise().norm();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (norms[i] > 0.0) inv[i] = 1.0 / norms[i];
  }
  const Eigen::MatrixXd unit = inv.asDiagonal() * embeddings;
  const Eigen::MatrixXd cos = unit * unit.transpose();

  // same(i,j) = 1 for same-chain pairs, off-diagonal only.
  Eigen::MatrixXd same = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && chains[static_cast<std::size_t>(i)] == chains[static_cast<std::size_t>(j)]) same(i, j) = 1.0;
    }
  }
  Eigen::MatrixXd different = Eigen::MatrixXd::Ones(n, n) - same;
  different.diagonal().setZero();

  PairwiseTerms out;
  out.same_pairs = static_cast<std::size_t>(same.sum() / 2.0 + 0.5);
  out.different_pairs = static_cast<std::size_t>(different.sum() / 2.0 + 0.5);
  // Sums over ordered pairs count each unordered pair twice.
  const double same_cos = same.cwiseProduct(cos).sum() / 2.0;
  const double diff_cos = different.cwiseProduct(cos).sum() / 2.0;
  if (out.same_pairs > 0) {
    out.attract = 0.5 * (1.0 - same_cos / static_cast<double>(out.same_pairs));
  }
  if (out.different_pairs > 0) {
    out.repulse = 0.5 + 0.5 * diff_cos / static_cast<double>(out.different_pairs);
  }

  if (grad) {
    // d/dcos_ij of the weighted terms, for each unordered pair.
    Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(n, n);
    if (out.same_pairs > 0 && attract_weight != 0.0) {
      weight -= (0.5 * attract_weight / static_cast<double>(out.same_pairs)) * same;
    }
    if (out.different_pairs > 0 && repulse_weight != 0.0) {
      weight += (0.5 * repulse_weight / static_cast<double>(out.different_pairs)) * different;
    }
    const Eigen::MatrixXd d_unit = weight * unit;
    // Project out the radial component and undo the normalization.
    const Eigen::VectorXd radial = d_unit.cwiseProduct(unit).rowwise().sum();
    *grad = inv.asDiagonal() * (d_unit - radial.asDiagonal() * unit);
  }
  return out;
}

double loss_attract(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains) {
  return pairwise_terms(embeddings, chains).attract;
}

double loss_repulse(const Eigen::MatrixXd& embeddings, std::span<const std::size_t> chains) {
  return pairwise_terms(embeddings, chains).repulse;
}

LossBreakdown loss_total(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& embeddings,
                         std::span<const std::size_t> labels, std::span<const std::size_t> chains,
                         const LossWeights& weights) {
  LossBreakdown out;
  out.weights = weights;
  out.cce = loss_cce(probs, labels);
  const PairwiseTerms pairs = pairwise_terms(embeddings, chains);
  out.attract = pairs.attract;
  out.repulse = pairs.repulse;
  out.same_pairs = pairs.same_pairs;
  out.different_pairs = pairs.different_pairs;
  out.total = weights.cce * out.cce + weights.lambda1 * out.attract + weights.lambda2 * out.repulse;
  return out;
}

LossGradients loss_gradients(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& embeddings,
                             std::span<const std::size_t> labels, std::span<const std::size_t> chains,
                             const LossWeights& weights) {
  check_rows(probs.rows(), labels.size(), "loss_gradients");
  LossGradients out;
  out.loss.weights = weights;
  out.loss.cce = loss_cce(probs, labels);

  const double n = static_cast<double>(std::max<std::size_t>(labels.size(), 1));
  out.d_logits = probs * (weights.cce / n);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto c = static_cast<Eigen::Index>(labels[i]);
    if (probs(r, c) < kProbFloor) {
      // The clamp makes this row's loss constant.
      out.d_logits.row(r).setZero();
    } else {
      out.d_logits(r, c) -= weights.cce / n;
    }
  }

  const PairwiseTerms pairs = pairwise_terms(embeddings, chains, weights.lambda1, weights.lambda2, &out.d_embeddings);
  out.loss.attract = pairs.attract;
  out.loss.repulse = pairs.repulse;
  out.loss.same_pairs = pairs.same_pairs;
  out.loss.different_pairs = pairs.different_pairs;
  out.loss.total = weights.cce * out.loss.cce + weights.lambda1 * pairs.attract + weights.lambda2 * pairs.repulse;
  return out;
}

}  // namespace evcore
