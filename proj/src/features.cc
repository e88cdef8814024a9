#include "evcore/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "evcore/errors.h"
#include "evcore/matrix_io.h"

namespace evcore {

LemmaVocab build_lemma_vocab(const Corpus& train) {
  std::map<std::string, std::size_t> counts;
  for (const Document& doc : train.documents()) {
    for (const Token& tok : doc.tokens) ++counts[tok.lemma];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  LemmaVocab vocab;
  for (std::size_t i = 0; i < ranked.size() && i < LemmaVocab::kOovSlot; ++i) {
    vocab.index_of.emplace(ranked[i].first, i);
  }
  return vocab;
}

std::array<std::vector<std::size_t>, kContextSets> context_token_sets(const Mention& mention,
                                                                     const Document& doc) {
  const std::size_t n = doc.tokens.size();
  const std::size_t first = mention.first_token();
  const std::size_t last = mention.last_token();
  auto before = [&](std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t k = std::min(count, first); k > 0; --k) out.push_back(first - k);
    return out;
  };
  auto after = [&](std::size_t count) {
    std::vector<std::size_t> out;
    for (std::size_t i = last + 1; i < n && i <= last + count; ++i) out.push_back(i);
    return out;
  };
  std::vector<std::size_t> sentence;
  const std::size_t sid = doc.tokens[first].sentence_id;
  for (const Token& tok : doc.tokens) {
    if (tok.sentence_id == sid) sentence.push_back(tok.index);
  }
  return {std::vector<std::size_t>{first},
          std::vector<std::size_t>{last},
          mention.token_indices,
          before(2),
          after(2),
          before(5),
          after(5),
          std::move(sentence)};
}

Eigen::VectorXd contextual_features(const Mention& mention, const Document& doc, const WordVectors& vectors,
                                    const LemmaVocab& vocab) {
  const std::size_t dim = vectors.dimension();
  const std::size_t block = dim + LemmaVocab::kSize;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kContextSets * block));
  const auto sets = context_token_sets(mention, doc);
  for (std::size_t s = 0; s < kContextSets; ++s) {
    const auto& tokens = sets[s];
    if (tokens.empty()) continue;
    const Eigen::Index base = static_cast<Eigen::Index>(s * block);
    for (std::size_t t : tokens) {
      const Token& tok = doc.tokens[t];
      auto vec = vectors.lookup(tok.word);
      for (std::size_t k = 0; k < vec.size(); ++k) out[base + static_cast<Eigen::Index>(k)] += vec[k];
      out[base + static_cast<Eigen::Index>(dim + vocab.slot(tok.lemma))] += 1.0;
    }
    out.segment(base, static_cast<Eigen::Index>(dim)) /= static_cast<double>(tokens.size());
  }
  return out;
}

namespace {

std::map<std::string, std::size_t> lemma_counts(const Document& doc) {
  std::map<std::string, std::size_t> counts;
  for (const Token& tok : doc.tokens) ++counts[tok.lemma];
  return counts;
}

}  // namespace

TfidfModel fit_tfidf(const Corpus& train) {
  if (train.empty()) throw FitError("TF-IDF needs at least one train document");
  std::map<std::string, std::size_t> doc_freq;
  for (const Document& doc : train.documents()) {
    for (const auto& [lemma, count] : lemma_counts(doc)) ++doc_freq[lemma];
  }
  TfidfModel model;
  model.num_documents = train.size();
  model.idf.resize(static_cast<Eigen::Index>(doc_freq.size()));
  const double n_docs = static_cast<double>(model.num_documents);
  for (const auto& [lemma, df] : doc_freq) {
    const std::size_t col = model.lemma_index.size();
    model.lemma_index.emplace(lemma, col);
    model.idf[static_cast<Eigen::Index>(col)] = std::log(1.0 + n_docs / static_cast<double>(df));
  }
  return model;
}

SparseVector TfidfModel::vectorize(const Document& doc) const {
  SparseVector v(static_cast<Eigen::Index>(dimension()));
  for (const auto& [lemma, count] : lemma_counts(doc)) {
    auto it = lemma_index.find(lemma);
    if (it == lemma_index.end()) continue;
    const auto col = static_cast<Eigen::Index>(it->second);
    v.coeffRef(col) = (1.0 + std::log(static_cast<double>(count))) * idf[col];
  }
  return v;
}

double cosine_similarity(const SparseVector& a, const SparseVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

PcaModel fit_pca(const Eigen::MatrixXd& rows, std::size_t num_components) {
  if (rows.rows() < 2) throw FitError("PCA needs at least two rows, got " + std::to_string(rows.rows()));
  const Eigen::Index dim = rows.cols();
  const auto k = static_cast<Eigen::Index>(num_components);
  PcaModel model;
  model.mean = rows.colwise().mean().transpose();
  const Eigen::MatrixXd centered = rows.rowwise() - model.mean.transpose();
  model.components = Eigen::MatrixXd::Zero(k, dim);
  model.explained_variance = Eigen::VectorXd::Zero(k);
  if (dim == 0) return model;

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(rows.rows(), dim)) * std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv[0] : 0.0);
  const Eigen::Index usable = std::min<Eigen::Index>(k, sv.size());
  for (Eigen::Index c = 0; c < usable; ++c) {
    if (!(sv[c] > tol)) break;
    Eigen::VectorXd axis = svd.matrixV().col(c);
    Eigen::Index arg;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis[arg] < 0) axis = -axis;
    model.components.row(c) = axis.transpose();
    model.explained_variance[c] = sv[c] * sv[c] / static_cast<double>(rows.rows() - 1);
  }
  return model;
}

Eigen::VectorXd PcaModel::transform(const Eigen::VectorXd& x) const {
  if (x.size() != mean.size()) throw ShapeError("PCA input has wrong dimension");
  return components * (x - mean);
}

Eigen::VectorXd PcaModel::transform(const SparseVector& x) const {
  if (x.size() != mean.size()) throw ShapeError("PCA input has wrong dimension");
  Eigen::VectorXd out = -(components * mean);
  for (SparseVector::InnerIterator it(x); it; ++it) out += components.col(it.index()) * it.value();
  return out;
}

Eigen::VectorXd doc_features(const Document& doc, const TfidfModel& tfidf, const PcaModel& pca) {
  return pca.transform(tfidf.vectorize(doc));
}

MentionText mention_text(const Mention& mention, const Document& doc) {
  MentionText text;
  for (std::size_t t : mention.token_indices) {
    text.words.push_back(doc.tokens[t].word);
    text.lemmas.push_back(doc.tokens[t].lemma);
  }
  std::sort(text.words.begin(), text.words.end());
  std::sort(text.lemmas.begin(), text.lemmas.end());
  return text;
}

double harmonic_similarity(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return 2.0 * static_cast<double>(common) / static_cast<double>(a.size() + b.size());
}

MentionPool::MentionPool(const std::vector<const Document*>& docs) {
  for (const Document* doc : docs) {
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < doc->mentions.size(); ++r) {
      members.push_back(texts_.size());
      texts_.push_back(mention_text(doc->mentions[r], *doc));
      doc_of_.push_back(doc_members_.size());
      rank_in_doc_.push_back(r + 1);
    }
    doc_members_.push_back(std::move(members));
  }
}

Eigen::VectorXd MentionPool::comparative_features(std::size_t i) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(kComparativeFeatures);
  const auto& members = doc_members_[doc_of_[i]];
  const std::size_t n = members.size();
  const std::size_t rank = rank_in_doc_[i];
  out[0] = rank == 1 ? 1.0 : 0.0;
  out[1] = static_cast<double>(rank) / static_cast<double>(n);
  out[2] = rank == n ? 1.0 : 0.0;

  const MentionText& self = texts_[i];
  auto average = [&](auto&& indices, std::size_t count, Eigen::Index word_slot) {
    if (count == 0) return;
    double words = 0.0, lemmas = 0.0;
    for (std::size_t j : indices) {
      if (j == i) continue;
      words += harmonic_similarity(self.words, texts_[j].words);
      lemmas += harmonic_similarity(self.lemmas, texts_[j].lemmas);
    }
    out[word_slot] = words / static_cast<double>(count);
    out[word_slot + 1] = lemmas / static_cast<double>(count);
  };
  average(members, n - 1, 3);
  std::vector<std::size_t> everyone(texts_.size());
  for (std::size_t j = 0; j < everyone.size(); ++j) everyone[j] = j;
  average(everyone, texts_.size() - 1, 5);
  return out;
}

FeatureModels fit_feature_models(const Corpus& train) {
  FeatureModels models;
  models.vocab = build_lemma_vocab(train);
  models.tfidf = fit_tfidf(train);
  Eigen::MatrixXd doc_rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(train.size()),
                                                   static_cast<Eigen::Index>(models.tfidf.dimension()));
  for (std::size_t d = 0; d < train.size(); ++d) {
    doc_rows.row(static_cast<Eigen::Index>(d)) = Eigen::VectorXd(models.tfidf.vectorize(train.documents()[d]));
  }
  models.pca = fit_pca(doc_rows, kDocFeatures);
  return models;
}

Eigen::VectorXd FeatureExtractor::assemble(const Mention& mention, const Document& doc, const MentionPool& pool,
                                           std::size_t pool_index) const {
  const Eigen::VectorXd context = contextual_features(mention, doc, vectors_, models_.vocab);
  const Eigen::VectorXd document = doc_features(doc, models_.tfidf, models_.pca);
  const Eigen::VectorXd comparative = pool.comparative_features(pool_index);
  const auto total = static_cast<Eigen::Index>(dimension());
  if (context.size() + document.size() + comparative.size() != total) {
    throw ShapeError("assembled feature width " +
                     std::to_string(context.size() + document.size() + comparative.size()) + " != " +
                     std::to_string(total));
  }
  Eigen::VectorXd out(total);
  out << context, document, comparative;
  return out;
}

Eigen::MatrixXd FeatureExtractor::extract(const Corpus& corpus, PoolScope scope) const {
  // Group documents into pools.
  std::vector<std::vector<const Document*>> pools;
  if (scope == PoolScope::kGlobal) {
    pools.emplace_back();
    for (const Document& doc : corpus.documents()) pools.back().push_back(&doc);
  } else {
    std::map<std::string, std::size_t> by_topic;
    for (const Document& doc : corpus.documents()) {
      auto [it, inserted] = by_topic.try_emplace(doc.topic_id, pools.size());
      if (inserted) pools.emplace_back();
      pools[it->second].push_back(&doc);
    }
  }
  std::map<const Mention*, Eigen::Index> row_of;
  for (const Mention* m : corpus.mentions()) row_of.emplace(m, static_cast<Eigen::Index>(row_of.size()));

  Eigen::MatrixXd out(static_cast<Eigen::Index>(corpus.mentions().size()), static_cast<Eigen::Index>(dimension()));
  for (const auto& docs : pools) {
    MentionPool pool(docs);
    std::size_t index = 0;
    for (const Document* doc : docs) {
      for (const Mention& m : doc->mentions) {
        out.row(row_of.at(&m)) = assemble(m, *doc, pool, index++).transpose();
      }
    }
  }
  return out;
}

void save_lemma_vocab(const std::filesystem::path& path, const LemmaVocab& vocab, const Stamp& stamp) {
  std::vector<std::string> by_slot(vocab.index_of.size());
  for (const auto& [lemma, slot] : vocab.index_of) by_slot.at(slot) = lemma;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << stamp.comment() << '\n';
  for (const auto& lemma : by_slot) out << lemma << '\n';
}

LemmaVocab load_lemma_vocab(const std::filesystem::path& path, Stamp* stamp) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  LemmaVocab vocab;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (std::exchange(first, false)) {
      if (auto header = Stamp::parse(line)) {
        if (stamp) *stamp = *header;
        continue;
      }
    }
    if (line.empty()) continue;
    if (vocab.index_of.size() >= LemmaVocab::kOovSlot) throw ParseError(path.string(), 0, "too many lemmas");
    vocab.index_of.emplace(line, vocab.index_of.size());
  }
  return vocab;
}

void save_tfidf(const std::filesystem::path& path, const TfidfModel& model, const Stamp& stamp) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out.precision(17);
  out << stamp.comment() << '\n';
  out << "N\t" << model.num_documents << '\n';
  for (const auto& [lemma, col] : model.lemma_index) {
    out << lemma << '\t' << model.idf[static_cast<Eigen::Index>(col)] << '\n';
  }
}

TfidfModel load_tfidf(const std::filesystem::path& path, Stamp* stamp) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  TfidfModel model;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> idf;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line_no == 0 && !header_seen) {
      header_seen = true;
      if (auto header = Stamp::parse(line)) {
        if (stamp) *stamp = *header;
        continue;
      }
    }
    ++line_no;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError(path.string(), line_no, "expected tab-separated fields");
    const std::string key = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    if (line_no == 1) {
      if (key != "N") throw ParseError(path.string(), line_no, "missing N header");
      model.num_documents = std::stoul(value);
      continue;
    }
    model.lemma_index.emplace(key, idf.size());
    idf.push_back(std::stod(value));
  }
  model.idf = Eigen::Map<Eigen::VectorXd>(idf.data(), static_cast<Eigen::Index>(idf.size()));
  return model;
}

void save_pca(const std::filesystem::path& path, const PcaModel& model, const Stamp& stamp) {
  Eigen::MatrixXd packed(model.components.rows() + 1, model.mean.size());
  packed.row(0) = model.mean.transpose();
  packed.bottomRows(model.components.rows()) = model.components;
  save_matrix(path, packed, stamp);
}

PcaModel load_pca(const std::filesystem::path& path, Stamp* stamp) {
  const Eigen::MatrixXd packed = load_matrix(path, stamp);
  if (packed.rows() < 1) throw InputError(path.string() + ": empty PCA model");
  PcaModel model;
  model.mean = packed.row(0).transpose();
  model.components = packed.bottomRows(packed.rows() - 1);
  model.explained_variance = Eigen::VectorXd::Zero(model.components.rows());
  return model;
}

}  // namespace evcore
