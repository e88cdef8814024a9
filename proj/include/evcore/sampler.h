#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evcore/rng.h"

namespace evcore {

// Draws training batches that always contain at least one coreferent pair and
// one non-coreferent pair: a random two members of a random multi-mention
// chain, one mention from another chain, then uniform fill without
// replacement. Needs at least one multi-mention chain and two chains.
class BatchSampler {
 public:
  static constexpr std::size_t kDefaultBatchSize = 272;

  BatchSampler(std::span<const std::size_t> chains, std::size_t batch_size = kDefaultBatchSize);

  std::size_t population() const { return chains_.size(); }
  std::size_t batch_size() const { return batch_size_; }
  // ceil(population / batch_size)
  std::size_t batches_per_epoch() const;

  // Row indices into the population, shuffled.
  std::vector<std::size_t> sample(Rng& rng) const;

 private:
  std::vector<std::size_t> chains_;
  std::size_t batch_size_;
  std::vector<std::vector<std::size_t>> multi_chains_;  // members of chains with >= 2 mentions
};

}  // namespace evcore
