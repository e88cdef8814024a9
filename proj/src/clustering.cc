#include "evcore/clustering.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "evcore/errors.h"
#include "evcore/scoring.h"

namespace evcore {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root survives, so roots are smallest members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

Labels labels_from(UnionFind& uf, std::size_t n) {
  Labels out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = uf.find(i);
  return canonical_labels(out);
}

}  // namespace

Labels singleton_labels(std::size_t n) {
  Labels out(n);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

Labels canonical_labels(std::span<const std::size_t> labels) {
  std::map<std::size_t, std::size_t> smallest;
  for (std::size_t i = 0; i < labels.size(); ++i) smallest.try_emplace(labels[i], i);
  Labels out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = smallest.at(labels[i]);
  return out;
}

Clustering to_clustering(const std::vector<std::string>& ids, std::span<const std::size_t> labels) {
  if (ids.size() != labels.size()) throw ShapeError("to_clustering: ids and labels differ in length");
  return clustering_from_labels(ids, std::vector<std::size_t>(labels.begin(), labels.end()));
}

Eigen::MatrixXd cosine_similarity_matrix(const Eigen::MatrixXd& rows) {
  const Eigen::Index n = rows.rows();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) inv[i] = 1.0 / norm;
  }
  const Eigen::MatrixXd unit = inv.asDiagonal() * rows;
  Eigen::MatrixXd sims = unit * unit.transpose();
  // Symmetrize exactly and pin the diagonal.
  sims = (0.5 * (sims + sims.transpose())).eval();
  sims.diagonal().setOnes();
  return sims;
}

Dendrogram::Dendrogram(const Eigen::MatrixXd& sims, const Labels* init, double floor) {
  const auto n = static_cast<std::size_t>(sims.rows());
  if (sims.cols() != sims.rows()) throw ShapeError("similarity matrix must be square");
  if (init && init->size() != n) throw ShapeError("initial partition size does not match similarity matrix");
  initial_ = init ? canonical_labels(*init) : singleton_labels(n);

  // Cluster slots in order of their representative (smallest member).
  std::vector<std::size_t> rep;
  std::vector<std::size_t> slot_of(n);
  std::map<std::size_t, std::size_t> slot_of_rep;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = slot_of_rep.try_emplace(initial_[i], rep.size());
    if (inserted) rep.push_back(initial_[i]);
    slot_of[i] = it->second;
  }
  const std::size_t k = rep.size();
  if (k < 2) return;

  const double none = -std::numeric_limits<double>::infinity();
  std::vector<double> link(k * k, none);
  auto at = [&](std::size_t a, std::size_t b) -> double& { return link[a * k + b]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t a = slot_of[i], b = slot_of[j];
      if (a == b) continue;
      const double s = sims(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (s > at(a, b)) at(a, b) = at(b, a) = s;
    }
  }

  std::vector<bool> active(k, true);
  std::vector<std::size_t> best(k, k);
  // Is b a better partner for a than c? Higher similarity, then smaller rep.
  auto better = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (c == k) return true;
    const double sb = at(a, b), sc = at(a, c);
    return sb > sc || (sb == sc && rep[b] < rep[c]);
  };
  auto refresh = [&](std::size_t a) {
    best[a] = k;
    for (std::size_t b = 0; b < k; ++b) {
      if (b != a && active[b] && better(a, b, best[a])) best[a] = b;
    }
  };
  for (std::size_t a = 0; a < k; ++a) refresh(a);

  for (std::size_t remaining = k; remaining > 1; --remaining) {
    // Global best pair: max similarity, then lowest (first, second).
    std::size_t pick = k;
    double pick_sim = none;
    std::pair<std::size_t, std::size_t> pick_key;
    for (std::size_t a = 0; a < k; ++a) {
      if (!active[a] || best[a] == k) continue;
      const double s = at(a, best[a]);
      const std::pair<std::size_t, std::size_t> key = std::minmax(rep[a], rep[best[a]]);
      if (pick == k || s > pick_sim || (s == pick_sim && key < pick_key)) {
        pick = a;
        pick_sim = s;
        pick_key = key;
      }
    }
    if (pick == k || pick_sim < floor || pick_sim == none) break;

    std::size_t x = pick, y = best[pick];
    if (rep[y] < rep[x]) std::swap(x, y);
    merges_.push_back(Merge{rep[x], rep[y], pick_sim});
    active[y] = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (!active[c] || c == x) continue;
      const double s = std::max(at(x, c), at(y, c));
      at(x, c) = at(c, x) = s;
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (!active[c] || c == x) continue;
      if (best[c] == x || best[c] == y) {
        best[c] = x;
      } else if (better(c, x, best[c])) {
        best[c] = x;
      }
    }
    refresh(x);
  }
}

Labels Dendrogram::cut(double tau) const {
  UnionFind uf(initial_.size());
  for (std::size_t i = 0; i < initial_.size(); ++i) uf.unite(i, initial_[i]);
  for (const Merge& m : merges_) {
    if (m.similarity < tau) break;
    uf.unite(m.first, m.second);
  }
  return labels_from(uf, initial_.size());
}

Labels agglomerate(const Eigen::MatrixXd& sims, double tau, const Labels* init) {
  return Dendrogram(sims, init, tau).cut(tau);
}

std::vector<double> tau_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return grid;
}

TauSearch tune_tau(const Dendrogram& dendrogram, std::span<const std::size_t> gold) {
  if (gold.size() != dendrogram.size()) throw ShapeError("tune_tau: gold labels do not match dendrogram");
  TauSearch out;
  auto evaluate = [&](double tau) {
    const double score = labels::b3(gold, dendrogram.cut(tau)).f1;
    out.evaluated.emplace_back(tau, score);
    return score;
  };

  const auto coarse = tau_grid(0.0, 1.0);
  std::size_t best_index = 0;
  double best_score = -1.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double score = evaluate(coarse[i]);
    if (score >= best_score) {
      best_score = score;
      best_index = i;
    }
  }
  const double lo = coarse[best_index == 0 ? 0 : best_index - 1];
  const double hi = coarse[std::min(best_index + 1, coarse.size() - 1)];
  for (double tau : tau_grid(lo, hi)) evaluate(tau);

  out.score = -1.0;
  for (const auto& [tau, score] : out.evaluated) {
    if (score > out.score || (score == out.score && tau > out.tau)) {
      out.tau = tau;
      out.score = score;
    }
  }
  return out;
}

LemmaContext lemma_context(const Corpus& corpus, const TfidfModel& tfidf) {
  LemmaContext ctx;
  const auto& docs = corpus.documents();
  std::vector<SparseVector> vectors;
  vectors.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    vectors.push_back(tfidf.vectorize(docs[d]));
    for (const Mention& m : docs[d].mentions) {
      ctx.head_lemmas.push_back(docs[d].tokens[m.last_token()].lemma);
      ctx.doc_of.push_back(d);
    }
  }
  const auto nd = static_cast<Eigen::Index>(docs.size());
  ctx.doc_similarity = Eigen::MatrixXd::Identity(nd, nd);
  for (Eigen::Index a = 0; a < nd; ++a) {
    for (Eigen::Index b = a + 1; b < nd; ++b) {
      const double s = cosine_similarity(vectors[static_cast<std::size_t>(a)], vectors[static_cast<std::size_t>(b)]);
      ctx.doc_similarity(a, b) = ctx.doc_similarity(b, a) = s;
    }
  }
  return ctx;
}

namespace {

std::map<std::string, std::vector<std::size_t>> by_lemma(const LemmaContext& ctx) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ctx.head_lemmas.size(); ++i) groups[ctx.head_lemmas[i]].push_back(i);
  return groups;
}

}  // namespace

Labels lemma_partition(const LemmaContext& ctx) {
  UnionFind uf(ctx.head_lemmas.size());
  for (const auto& [lemma, members] : by_lemma(ctx)) {
    for (std::size_t m : members) uf.unite(members.front(), m);
  }
  return labels_from(uf, ctx.head_lemmas.size());
}

Labels lemma_delta_init(const LemmaContext& ctx, double delta) {
  UnionFind uf(ctx.head_lemmas.size());
  for (const auto& [lemma, members] : by_lemma(ctx)) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const std::size_t da = ctx.doc_of[members[x]];
        const std::size_t db = ctx.doc_of[members[y]];
        if (da == db ||
            ctx.doc_similarity(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db)) > delta) {
          uf.unite(members[x], members[y]);
        }
      }
    }
  }
  return labels_from(uf, ctx.head_lemmas.size());
}

std::vector<double> delta_grid(std::size_t count) { return tau_grid(0.0, 1.0, count); }

DeltaSearch tune_delta_baseline(const LemmaContext& ctx, std::span<const std::size_t> gold,
                                const std::vector<double>& grid) {
  DeltaSearch out;
  bool first = true;
  for (double delta : grid) {
    const double score = labels::b3(gold, lemma_delta_init(ctx, delta)).f1;
    if (first || score > out.score || (score == out.score && delta > out.delta)) {
      out = DeltaSearch{delta, 0.0, score};
      first = false;
    }
  }
  return out;
}

DeltaSearch tune_delta(const LemmaContext& ctx, const Eigen::MatrixXd& sims, std::span<const std::size_t> gold,
                       const std::vector<double>& grid) {
  DeltaSearch out;
  bool first = true;
  for (double delta : grid) {
    const Labels init = lemma_delta_init(ctx, delta);
    const TauSearch search = tune_tau(Dendrogram(sims, &init), gold);
    if (first || search.score > out.score || (search.score == out.score && delta > out.delta)) {
      out = DeltaSearch{delta, search.tau, search.score};
      first = false;
    }
  }
  return out;
}

}  // namespace evcore
