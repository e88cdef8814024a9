#include "evcore/sampler.h"

#include <algorithm>
#include <map>

#include "evcore/errors.h"

namespace evcore {

BatchSampler::BatchSampler(std::span<const std::size_t> chains, std::size_t batch_size)
    : chains_(chains.begin(), chains.end()), batch_size_(batch_size) {
  if (batch_size_ < 3) throw SamplerError("batch size must be at least 3");
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < chains_.size(); ++i) members[chains_[i]].push_back(i);
  for (auto& [chain, rows] : members) {
    if (rows.size() >= 2) multi_chains_.push_back(std::move(rows));
  }
  if (multi_chains_.empty()) throw SamplerError("training data has no chain with two or more mentions");
  if (members.size() < 2) throw SamplerError("training data has fewer than two chains");
}

std::size_t BatchSampler::batches_per_epoch() const {
  return (chains_.size() + batch_size_ - 1) / batch_size_;
}

std::vector<std::size_t> BatchSampler::sample(Rng& rng) const {
  const std::size_t n = chains_.size();
  std::vector<std::size_t> batch;
  if (n <= batch_size_) {
    batch.resize(n);
    for (std::size_t i = 0; i < n; ++i) batch[i] = i;
    rng.shuffle(std::span<std::size_t>(batch));
    return batch;
  }

  std::vector<bool> taken(n, false);
  const auto& chain = multi_chains_[rng.index(multi_chains_.size())];
  const std::size_t a = rng.index(chain.size());
  std::size_t b = rng.index(chain.size() - 1);
  if (b >= a) ++b;
  const std::size_t first = chain[a];
  const std::size_t second = chain[b];
  const std::size_t outside = rng.index(n - chain.size());
  // The outside-th row not in this chain.
  std::size_t third = 0;
  for (std::size_t i = 0, seen = 0; i < n; ++i) {
    if (chains_[i] == chains_[first]) continue;
    if (seen++ == outside) {
      third = i;
      break;
    }
  }
  for (std::size_t row : {first, second, third}) {
    taken[row] = true;
    batch.push_back(row);
  }

  std::vector<std::size_t> rest;
  rest.reserve(n - 3);
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  // Partial Fisher-Yates: the first k entries are a uniform draw.
  const std::size_t k = batch_size_ - 3;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(rest[i], rest[i + rng.index(rest.size() - i)]);
    batch.push_back(rest[i]);
  }
  rng.shuffle(std::span<std::size_t>(batch));
  return batch;
}

}  // namespace evcore
