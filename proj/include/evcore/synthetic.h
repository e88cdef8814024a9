#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "evcore/corpus.h"
#include "evcore/word_vectors.h"

namespace evcore {

// Desk-scale stand-in for an annotated corpus. Chains live inside topics;
// each chain has a preferred head lemma (shared with other chains at times)
// and every mention carries a feature row whose informative block is a noisy
// copy of its chain prototype, padded with nuisance dimensions. Part of the
// nuisance is shared by all mentions of a document, the way context features
// are.
struct SyntheticOptions {
  std::size_t topics = 6;
  std::size_t documents = 60;
  std::size_t mentions = 300;
  std::size_t chains = 40;
  std::size_t singleton_chains = 10;
  std::size_t head_lemmas = 24;
  double lemma_switch_rate = 0.25;  // mention uses another head lemma
  std::size_t informative_dims = 16;
  std::size_t noise_dims = 64;
  double within_chain_spread = 0.35;
  double noise_scale = 0.65;
  double document_share = 0.5;  // fraction of nuisance variance shared per document
  std::uint64_t seed = 7;
};

struct SyntheticData {
  Corpus corpus;
  TopicSplit split;          // first half train, next third validation, rest test
  Eigen::MatrixXd features;  // one row per corpus.mentions() entry
};

SyntheticData make_synthetic(const SyntheticOptions& options = {});

// Random vectors for every word in the corpus; words of the same head lemma
// share a direction.
WordVectors synthetic_word_vectors(const Corpus& corpus, std::size_t dimension, std::uint64_t seed);

struct SyntheticFiles {
  std::filesystem::path corpus;   // corpus.tsv
  std::filesystem::path vectors;  // vectors.txt
  std::filesystem::path config;   // run.ini, output under dir/out
};

// Writes a ready-to-run workspace: the corpus, word vectors of the given
// dimension, and a run configuration sized for a desk-scale network.
SyntheticFiles write_synthetic_files(const SyntheticData& data, const std::filesystem::path& dir,
                                     std::size_t vector_dimension, std::uint64_t seed);

}  // namespace evcore
