#include "evcore/trainer.h"

#include <cmath>
#include <iostream>
#include <sstream>

#include "evcore/clustering.h"
#include "evcore/errors.h"
#include "evcore/rng.h"
#include "evcore/sampler.h"

namespace evcore {

namespace {

Batch gather(const TrainData& data, const std::vector<std::size_t>& rows, const NetShape& shape, double dropout,
             Rng& rng) {
  Batch batch;
  batch.inputs.resize(static_cast<Eigen::Index>(rows.size()), data.features.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    batch.inputs.row(static_cast<Eigen::Index>(r)) = data.features.row(static_cast<Eigen::Index>(rows[r]));
    batch.labels.push_back(data.labels[rows[r]]);
    batch.chains.push_back(data.chains[rows[r]]);
  }
  if (dropout > 0.0) batch.masks = sample_dropout_masks(rows.size(), shape, dropout, rng);
  return batch;
}

[[noreturn]] void diverged(std::size_t epoch, std::size_t batch, const LossBreakdown& loss, const char* what) {
  std::ostringstream msg;
  msg << "training diverged at epoch " << epoch << ", batch " << batch << " (" << what << "): total=" << loss.total
      << " cce=" << loss.cce << " attract=" << loss.attract << " repulse=" << loss.repulse;
  throw TrainingDiverged(msg.str());
}

}  // namespace

TrainResult train(const TrainData& data, const ValidationData* validation, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  const auto n = static_cast<std::size_t>(data.features.rows());
  if (data.labels.size() != n || data.chains.size() != n) throw ShapeError("train: labels do not match features");
  for (std::size_t label : data.labels) {
    if (label >= data.num_classes) throw ShapeError("train: class label out of range");
  }
  if (validation && validation->gold.size() != static_cast<std::size_t>(validation->features.rows())) {
    throw ShapeError("train: validation gold labels do not match features");
  }
  if (config.dropout < 0.0 || config.dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");

  Rng rng(config.seed);
  const NetShape shape{static_cast<std::size_t>(data.features.cols()), config.hidden, config.embedding,
                       config.hidden, data.num_classes};
  NetParams params = init_params(shape, rng);
  AdamState adam = AdamState::zeros(shape);
  const BatchSampler sampler(data.chains, config.batch_size);

  TrainResult result;
  result.params = params;
  result.adam = adam;
  bool have_best = false;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.mean_loss.weights = config.weights;
    const std::size_t batches = sampler.batches_per_epoch();
    for (std::size_t b = 0; b < batches; ++b) {
      const Batch batch = gather(data, sampler.sample(rng), shape, config.dropout, rng);
      const GradientResult step = compute_gradients(params, batch, config.weights, config.dropout);
      if (!std::isfinite(step.loss.total)) diverged(epoch, b, step.loss, "non-finite loss");
      if (!step.grads.all_finite()) diverged(epoch, b, step.loss, "non-finite gradient");
      adam_step(params, adam, step.grads, config.lr);
      if (!params.all_finite()) diverged(epoch, b, step.loss, "non-finite parameters");
      record.mean_loss.total += step.loss.total / static_cast<double>(batches);
      record.mean_loss.cce += step.loss.cce / static_cast<double>(batches);
      record.mean_loss.attract += step.loss.attract / static_cast<double>(batches);
      record.mean_loss.repulse += step.loss.repulse / static_cast<double>(batches);
      record.mean_loss.same_pairs += step.loss.same_pairs;
      record.mean_loss.different_pairs += step.loss.different_pairs;
    }

    bool improved = !validation;
    if (validation) {
      const Eigen::MatrixXd sims = cosine_similarity_matrix(embed(params, validation->features));
      const TauSearch search = tune_tau(Dendrogram(sims), validation->gold);
      record.validation_b3 = search.score;
      record.tau = search.tau;
      improved = !have_best || search.score > result.best_b3;
    }
    if (improved) {
      have_best = true;
      result.params = params;
      result.adam = adam;
      result.best_epoch = epoch;
      result.best_b3 = record.validation_b3;
      result.best_tau = record.tau;
    }
    result.history.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  return result;
}

}  // namespace evcore
