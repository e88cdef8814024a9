#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "evcore/corpus.h"
#include "evcore/word_vectors.h"

#include "evcore/stamp.h"

namespace evcore {

// Lemma one-hot vocabulary: the 499 most frequent train lemmas (ties broken
// lexicographically) take slots 0..498; everything else shares slot 499.
struct LemmaVocab {
  static constexpr std::size_t kSize = 500;
  static constexpr std::size_t kOovSlot = kSize - 1;

  std::map<std::string, std::size_t> index_of;

  std::size_t slot(const std::string& lemma) const {
    auto it = index_of.find(lemma);
    return it == index_of.end() ? kOovSlot : it->second;
  }
};

LemmaVocab build_lemma_vocab(const Corpus& train);

inline constexpr std::size_t kContextSets = 8;
inline constexpr std::size_t kDocFeatures = 100;
inline constexpr std::size_t kComparativeFeatures = 7;

// Total input width for word vectors of dimension E.
constexpr std::size_t feature_dimension(std::size_t word_dim) {
  return kContextSets * (word_dim + LemmaVocab::kSize) + kDocFeatures + kComparativeFeatures;
}

// The eight token sets, in order: first token, last token, all mention tokens,
// two preceding, two following, five preceding, five following, sentence.
// Windows stay inside the document but may cross sentence boundaries.
std::array<std::vector<std::size_t>, kContextSets> context_token_sets(const Mention& mention,
                                                                     const Document& doc);

// Per set: mean word vector (E values, OOV words count as zeros) followed by
// the summed 500-slot lemma counts. Length 8*(E+500).
Eigen::VectorXd contextual_features(const Mention& mention, const Document& doc, const WordVectors& vectors,
                                    const LemmaVocab& vocab);

using SparseVector = Eigen::SparseVector<double>;

// Lemma TF-IDF with TF = 1 + ln f and IDF = ln(1 + N / n_t), over the lemmas
// of the train documents (columns sorted by lemma).
struct TfidfModel {
  std::map<std::string, std::size_t> lemma_index;
  Eigen::VectorXd idf;
  std::size_t num_documents = 0;

  std::size_t dimension() const { return lemma_index.size(); }
  // Lemmas unseen in training are ignored.
  SparseVector vectorize(const Document& doc) const;
};

TfidfModel fit_tfidf(const Corpus& train);

double cosine_similarity(const SparseVector& a, const SparseVector& b);

// Principal components of the row data. Rows of `components` are orthonormal
// (or zero when the data rank is below the requested count); the largest
// magnitude coordinate of each nonzero component is positive.
struct PcaModel {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // num_components x input_dim
  Eigen::VectorXd explained_variance;

  Eigen::Index num_components() const { return components.rows(); }
  Eigen::VectorXd transform(const Eigen::VectorXd& x) const;
  Eigen::VectorXd transform(const SparseVector& x) const;
};

PcaModel fit_pca(const Eigen::MatrixXd& rows, std::size_t num_components = kDocFeatures);

Eigen::VectorXd doc_features(const Document& doc, const TfidfModel& tfidf, const PcaModel& pca);

// Sorted word and lemma multisets of a mention's span.
struct MentionText {
  std::vector<std::string> words;
  std::vector<std::string> lemmas;
};

MentionText mention_text(const Mention& mention, const Document& doc);

// 2|A n B| / (|A| + |B|) over multisets; 0 when both are empty.
double harmonic_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b);

// The mentions a clustering request covers. Comparative features relate each
// mention to the other mentions of its document and of the whole pool.
class MentionPool {
 public:
  explicit MentionPool(const std::vector<const Document*>& docs);

  std::size_t size() const { return texts_.size(); }
  const MentionText& text(std::size_t i) const { return texts_[i]; }

  // [is_first, rank/n, is_last, doc word overlap, doc lemma overlap,
  //  pool word overlap, pool lemma overlap]; averages exclude the mention.
  Eigen::VectorXd comparative_features(std::size_t i) const;

 private:
  std::vector<MentionText> texts_;
  std::vector<std::size_t> doc_of_;
  std::vector<std::size_t> rank_in_doc_;  // 1-based
  std::vector<std::vector<std::size_t>> doc_members_;
};

enum class PoolScope { kGlobal, kTopic };

// Models fitted on the train split only.
struct FeatureModels {
  LemmaVocab vocab;
  TfidfModel tfidf;
  PcaModel pca;
};

FeatureModels fit_feature_models(const Corpus& train);

// Assembles full feature rows: contextual, document, positional+comparative.
class FeatureExtractor {
 public:
  FeatureExtractor(const WordVectors& vectors, const FeatureModels& models)
      : vectors_(vectors), models_(models) {}

  std::size_t dimension() const { return feature_dimension(vectors_.dimension()); }

  Eigen::VectorXd assemble(const Mention& mention, const Document& doc, const MentionPool& pool,
                           std::size_t pool_index) const;

  // One row per mention, in corpus.mentions() order.
  Eigen::MatrixXd extract(const Corpus& corpus, PoolScope scope = PoolScope::kGlobal) const;

 private:
  const WordVectors& vectors_;
  const FeatureModels& models_;
};

void save_lemma_vocab(const std::filesystem::path& path, const LemmaVocab& vocab, const Stamp& stamp = {});
LemmaVocab load_lemma_vocab(const std::filesystem::path& path, Stamp* stamp = nullptr);
void save_tfidf(const std::filesystem::path& path, const TfidfModel& model, const Stamp& stamp = {});
TfidfModel load_tfidf(const std::filesystem::path& path, Stamp* stamp = nullptr);
// Mean in row 0, components below.
void save_pca(const std::filesystem::path& path, const PcaModel& model, const Stamp& stamp = {});
PcaModel load_pca(const std::filesystem::path& path, Stamp* stamp = nullptr);

}  // namespace evcore
