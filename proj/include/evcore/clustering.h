#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evcore/chains.h"
#include "evcore/corpus.h"
#include "evcore/features.h"

namespace evcore {

// A partition of items 0..n-1 as per-item labels. Canonical labels name each
// cluster by its smallest member.
using Labels = std::vector<std::size_t>;

Labels singleton_labels(std::size_t n);
Labels canonical_labels(std::span<const std::size_t> labels);
Clustering to_clustering(const std::vector<std::string>& ids, std::span<const std::size_t> labels);

// Pairwise cosine similarity of the rows; zero rows have similarity 0 with
// everything else. Diagonal is 1.
Eigen::MatrixXd cosine_similarity_matrix(const Eigen::MatrixXd& rows);

// One single-linkage merge, naming both clusters by their smallest member
// (first < second).
struct Merge {
  std::size_t first;
  std::size_t second;
  double similarity;

  bool operator==(const Merge&) const = default;
};

// Single-linkage agglomeration from an initial partition. Each step merges
// the most similar pair of clusters; ties go to the lexicographically lowest
// (first, second) pair. Merge similarities never increase, so the clustering
// at threshold tau is the initial partition plus every merge with
// similarity >= tau.
class Dendrogram {
 public:
  Dendrogram(const Eigen::MatrixXd& similarities, const Labels* init = nullptr,
             double floor = -std::numeric_limits<double>::infinity());

  std::size_t size() const { return initial_.size(); }
  const Labels& initial() const { return initial_; }
  const std::vector<Merge>& merges() const { return merges_; }

  Labels cut(double tau) const;

 private:
  Labels initial_;
  std::vector<Merge> merges_;
};

// Merge while the best pair similarity is >= tau.
Labels agglomerate(const Eigen::MatrixXd& similarities, double tau, const Labels* init = nullptr);

struct TauSearch {
  double tau = 0.0;
  double score = 0.0;  // B3 F1
  std::vector<std::pair<double, double>> evaluated;
};

// Two passes: 20 evenly spaced thresholds over [0, 1], then 20 evenly spaced
// over the span between the best first-pass value's neighbours. Maximizes B3
// F1 against the gold labels; ties prefer the larger tau.
TauSearch tune_tau(const Dendrogram& dendrogram, std::span<const std::size_t> gold);

inline constexpr std::size_t kTauGridSize = 20;
std::vector<double> tau_grid(double lo, double hi, std::size_t count = kTauGridSize);

// Head lemmas (lemma of the final span token), document membership, and
// document TF-IDF cosine similarities for the mentions of a corpus.
struct LemmaContext {
  std::vector<std::string> head_lemmas;
  std::vector<std::size_t> doc_of;
  Eigen::MatrixXd doc_similarity;
};

LemmaContext lemma_context(const Corpus& corpus, const TfidfModel& tfidf);

// Same head lemma, anywhere in the pool.
Labels lemma_partition(const LemmaContext& ctx);

// Transitive closure of: same head lemma and (same document or document
// similarity > delta).
Labels lemma_delta_init(const LemmaContext& ctx, double delta);

inline constexpr std::size_t kDeltaGridSize = 100;
// count evenly spaced values over [0, 1].
std::vector<double> delta_grid(std::size_t count = kDeltaGridSize);

struct DeltaSearch {
  double delta = 0.0;
  double tau = 0.0;
  double score = 0.0;
};

// Lemma-delta alone; tau is unused.
DeltaSearch tune_delta_baseline(const LemmaContext& ctx, std::span<const std::size_t> gold,
                                const std::vector<double>& grid);

// Lemma-delta initialization continued with embedding similarities; for each
// delta the threshold is tuned with tune_tau. Ties prefer the larger delta.
DeltaSearch tune_delta(const LemmaContext& ctx, const Eigen::MatrixXd& similarities,
                       std::span<const std::size_t> gold, const std::vector<double>& grid);

}  // namespace evcore
