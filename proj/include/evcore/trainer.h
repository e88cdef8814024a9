#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "evcore/loss.h"
#include "evcore/net.h"

namespace evcore {

struct TrainConfig {
  double lr = 0.00085;
  std::size_t epochs = 100;
  std::size_t batch_size = 272;
  LossWeights weights;
  double dropout = 0.25;
  std::uint64_t seed = 1;
  std::size_t hidden = 1000;
  std::size_t embedding = 250;
};

struct TrainData {
  const Eigen::MatrixXd& features;
  std::vector<std::size_t> labels;  // class in [0, C]
  std::vector<std::size_t> chains;  // distinct id per gold chain
  std::size_t num_classes = 0;      // C + 1
};

struct ValidationData {
  const Eigen::MatrixXd& features;
  std::vector<std::size_t> gold;  // gold chain label per mention
};

struct EpochRecord {
  std::size_t epoch = 0;          // 1-based
  LossBreakdown mean_loss;        // averaged over the epoch's batches
  double validation_b3 = 0.0;     // with tuned tau; 0 without validation data
  double tau = 0.0;
};

struct TrainResult {
  NetParams params;  // checkpoint with the best validation B3 (last epoch without validation)
  AdamState adam;
  std::size_t best_epoch = 0;
  double best_b3 = 0.0;
  double best_tau = 0.0;
  std::vector<EpochRecord> history;
};

// Adam over sampled batches for config.epochs epochs of ceil(n / batch_size)
// batches. After each epoch the validation mentions are embedded, tau is
// tuned for B3, and the best epoch is retained. A non-finite loss or
// parameter throws TrainingDiverged.
TrainResult train(const TrainData& data, const ValidationData* validation, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace evcore
