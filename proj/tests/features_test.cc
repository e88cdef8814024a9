#include "evcore/features.h"

#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "evcore/errors.h"
#include "test_util.h"

namespace evcore {
namespace {

using testing::random_matrix;

Document make_doc(const std::string& id, const std::string& topic, const std::vector<std::string>& words,
                  const std::vector<std::vector<std::size_t>>& spans, std::vector<std::size_t> sentences = {}) {
  Document doc;
  doc.doc_id = id;
  doc.topic_id = topic;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::size_t sid = sentences.empty() ? 0 : sentences[i];
    std::string lemma = words[i];
    for (auto& ch : lemma) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    doc.tokens.push_back(Token{i, sid, words[i], lemma});
  }
  for (std::size_t k = 0; k < spans.size(); ++k) {
    doc.mentions.push_back(Mention{id + "_m" + std::to_string(k), id, spans[k], "c" + std::to_string(k)});
  }
  return doc;
}

TEST(LemmaVocab, FewLemmasAndOov) {
  const Corpus c({make_doc("d", "1", {"a", "b", "c", "a"}, {})});
  const LemmaVocab v = build_lemma_vocab(c);
  EXPECT_EQ(v.index_of.size(), 3u);
  EXPECT_EQ(v.slot("a"), 0u);
  EXPECT_EQ(v.slot("zzz"), LemmaVocab::kOovSlot);
  EXPECT_EQ(LemmaVocab::kOovSlot, 499u);
  EXPECT_EQ(LemmaVocab::kSize, 500u);
}

TEST(LemmaVocab, TiesBrokenLexicographically) {
  const Corpus c({make_doc("d", "1", {"b", "a", "c", "c", "b", "a", "c"}, {})});
  const LemmaVocab v = build_lemma_vocab(c);
  EXPECT_EQ(v.slot("c"), 0u);
  EXPECT_EQ(v.slot("a"), 1u);
  EXPECT_EQ(v.slot("b"), 2u);
}

TEST(LemmaVocab, KeepsExactly499MostFrequent) {
  std::vector<std::string> words;
  // Lemma k occurs k+1 times, so the 499 kept are the highest k.
  for (int k = 0; k < 600; ++k) {
    for (int r = 0; r <= k; ++r) words.push_back("l" + std::to_string(k));
  }
  const LemmaVocab v = build_lemma_vocab(Corpus({make_doc("d", "1", words, {})}));
  EXPECT_EQ(v.index_of.size(), 499u);
  EXPECT_EQ(v.slot("l599"), 0u);
  EXPECT_EQ(v.slot("l101"), 498u);
  EXPECT_EQ(v.slot("l100"), LemmaVocab::kOovSlot);
}

TEST(ContextSets, WindowsAndSentence) {
  const Document doc = make_doc("d", "1", {"t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"}, {{3, 4}},
                                {0, 0, 0, 1, 1, 1, 1, 2, 2});
  const auto sets = context_token_sets(doc.mentions[0], doc);
  using V = std::vector<std::size_t>;
  EXPECT_EQ(sets[0], V{3});
  EXPECT_EQ(sets[1], V{4});
  EXPECT_EQ(sets[2], (V{3, 4}));
  EXPECT_EQ(sets[3], (V{1, 2}));
  EXPECT_EQ(sets[4], (V{5, 6}));
  EXPECT_EQ(sets[5], (V{0, 1, 2}));
  EXPECT_EQ(sets[6], (V{5, 6, 7, 8}));
  EXPECT_EQ(sets[7], (V{3, 4, 5, 6}));
}

class ContextualTest : public ::testing::Test {
 protected:
  void SetUp() override {
    vectors_ = WordVectors(2);
    vectors_.add("run", std::vector<double>{1.0, 2.0});
    vectors_.add("ran", std::vector<double>{3.0, -1.0});
    vectors_.add("fast", std::vector<double>{0.5, 0.5});
  }
  WordVectors vectors_{2};
};

TEST_F(ContextualTest, MentionAtDocumentStart) {
  const Document doc = make_doc("d", "1", {"run", "fast", "now"}, {{0}});
  const LemmaVocab vocab = build_lemma_vocab(Corpus({doc}));
  const Eigen::VectorXd f = contextual_features(doc.mentions[0], doc, vectors_, vocab);
  const Eigen::Index block = 2 + 500;
  ASSERT_EQ(f.size(), 8 * block);
  // First-token block word part equals the word vector.
  EXPECT_DOUBLE_EQ(f[0], 1.0);
  EXPECT_DOUBLE_EQ(f[1], 2.0);
  // Preceding windows (sets 3 and 5) are all zero.
  EXPECT_EQ(f.segment(3 * block, block).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(f.segment(5 * block, block).cwiseAbs().sum(), 0.0);
  // Following-two window: "fast" and the OOV "now" (zero vector dilutes the mean).
  EXPECT_DOUBLE_EQ(f[4 * block + 0], 0.25);
  EXPECT_DOUBLE_EQ(f[4 * block + 1], 0.25);
}

TEST_F(ContextualTest, RepeatedLemmaCountsTwice) {
  Document doc = make_doc("d", "1", {"x", "run", "ran"}, {{1, 2}});
  doc.tokens[2].lemma = "run";
  const LemmaVocab vocab = build_lemma_vocab(Corpus({doc}));
  const Eigen::VectorXd f = contextual_features(doc.mentions[0], doc, vectors_, vocab);
  const Eigen::Index block = 2 + 500;
  const Eigen::Index all = 2 * block + 2;
  EXPECT_DOUBLE_EQ(f[all + static_cast<Eigen::Index>(vocab.slot("run"))], 2.0);
  EXPECT_DOUBLE_EQ(f.segment(all, 500).sum(), 2.0);
  // Mean word vector of the span.
  EXPECT_DOUBLE_EQ(f[2 * block], 2.0);
  EXPECT_DOUBLE_EQ(f[2 * block + 1], 0.5);
}

TEST_F(ContextualTest, LemmaBlocksCountTokens) {
  Rng rng(11);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("w" + std::to_string(rng.index(12)));
  std::vector<std::size_t> sentences;
  for (int i = 0; i < 30; ++i) sentences.push_back(static_cast<std::size_t>(i / 7));
  const Document doc = make_doc("d", "1", words, {{4}, {10, 11}, {29}}, sentences);
  const LemmaVocab vocab = build_lemma_vocab(Corpus({make_doc("t", "1", {"w1", "w2", "w3"}, {})}));
  for (const Mention& m : doc.mentions) {
    const Eigen::VectorXd f = contextual_features(m, doc, vectors_, vocab);
    const auto sets = context_token_sets(m, doc);
    for (std::size_t s = 0; s < kContextSets; ++s) {
      const Eigen::VectorXd counts = f.segment(static_cast<Eigen::Index>(s * 502 + 2), 500);
      EXPECT_DOUBLE_EQ(counts.sum(), static_cast<double>(sets[s].size()));
      EXPECT_GE(counts.minCoeff(), 0.0);
      for (Eigen::Index k = 0; k < counts.size(); ++k) EXPECT_EQ(counts[k], std::round(counts[k]));
    }
  }
}

TEST(Tfidf, Formula) {
  std::vector<Document> docs;
  std::vector<std::string> first(7, "x");
  first.push_back("y");
  docs.push_back(make_doc("d0", "1", first, {}));
  docs.push_back(make_doc("d1", "1", {"x", "y"}, {}));
  for (int i = 2; i < 10; ++i) docs.push_back(make_doc("d" + std::to_string(i), "1", {"y"}, {}));
  const Corpus c(docs);
  const TfidfModel m = fit_tfidf(c);
  EXPECT_EQ(m.num_documents, 10u);
  const Eigen::VectorXd v0 = m.vectorize(c.documents()[0]);
  const auto x = static_cast<Eigen::Index>(m.lemma_index.at("x"));
  const auto y = static_cast<Eigen::Index>(m.lemma_index.at("y"));
  EXPECT_NEAR(v0[x], (1.0 + std::log(7.0)) * std::log(6.0), 1e-12);
  // y occurs once in every document: TF = 1, IDF = ln 2.
  EXPECT_NEAR(v0[y], std::log(2.0), 1e-12);
  for (Eigen::Index k = 0; k < m.idf.size(); ++k) EXPECT_GT(m.idf[k], 0.0);
}

TEST(Tfidf, UnseenLemmasIgnored) {
  const Corpus c({make_doc("a", "1", {"x"}, {}), make_doc("b", "1", {"y"}, {})});
  const TfidfModel m = fit_tfidf(c);
  const Document unseen = make_doc("z", "9", {"q", "r"}, {});
  EXPECT_EQ(Eigen::VectorXd(m.vectorize(unseen)).norm(), 0.0);
}

TEST(Pca, OrthonormalComponents) {
  Rng rng(1);
  const Eigen::MatrixXd x = random_matrix(200, 500, rng);
  const PcaModel p = fit_pca(x, 100);
  ASSERT_EQ(p.components.rows(), 100);
  const Eigen::MatrixXd gram = p.components * p.components.transpose();
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(100, 100)).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index c = 0; c < 100; ++c) {
    Eigen::Index arg;
    p.components.row(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(p.components(c, arg), 0.0);
  }
}

TEST(Pca, TruncationReconstruction) {
  Rng rng(2);
  const Eigen::MatrixXd x = random_matrix(200, 500, rng);
  auto error = [&](std::size_t k) {
    const PcaModel p = fit_pca(x, k);
    const Eigen::MatrixXd centered = x.rowwise() - p.mean.transpose();
    const Eigen::MatrixXd recon = centered * p.components.transpose() * p.components;
    return (centered - recon).squaredNorm();
  };
  EXPECT_LE(error(100), error(50));
}

TEST(Pca, RankOneKeepsOneComponent) {
  Rng rng(3);
  Eigen::VectorXd v = random_matrix(1, 30, rng).row(0).transpose().normalized();
  Eigen::MatrixXd x(10, 30);
  for (Eigen::Index r = 0; r < 10; ++r) x.row(r) = (rng.normal() * v).transpose();
  const PcaModel p = fit_pca(x, 100);
  ASSERT_EQ(p.components.rows(), 100);
  EXPECT_NEAR(std::abs(p.components.row(0).dot(v.transpose())), 1.0, 1e-10);
  EXPECT_EQ(p.components.bottomRows(99).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(p.explained_variance.tail(99).sum(), 0.0, 1e-12);
}

TEST(Pca, FullRankIsIsometry) {
  Rng rng(4);
  const Eigen::MatrixXd x = random_matrix(300, 100, rng);
  const PcaModel p = fit_pca(x, 100);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd a = x.row(static_cast<Eigen::Index>(rng.index(300))).transpose();
    const Eigen::VectorXd b = random_matrix(100, 1, rng).col(0);
    EXPECT_NEAR((p.transform(a) - p.transform(b)).norm(), (a - b).norm(), 1e-9);
  }
}

TEST(Pca, NeedsTwoRows) {
  EXPECT_THROW(fit_pca(Eigen::MatrixXd::Ones(1, 4), 100), FitError);
}

TEST(Pca, SparseAndDenseTransformsAgree) {
  Rng rng(5);
  const PcaModel p = fit_pca(random_matrix(20, 12, rng), 100);
  SparseVector s(12);
  s.coeffRef(3) = 1.5;
  s.coeffRef(7) = -2.0;
  EXPECT_LT((p.transform(s) - p.transform(Eigen::VectorXd(s))).norm(), 1e-12);
}

TEST(DocFeatures, EmptyDocumentProjectsNegativeMean) {
  const Corpus c({make_doc("a", "1", {"x", "y"}, {}), make_doc("b", "1", {"y", "z"}, {}),
                  make_doc("c", "1", {"x", "x"}, {})});
  const FeatureModels models = fit_feature_models(c);
  Document empty;
  const Eigen::VectorXd f = doc_features(empty, models.tfidf, models.pca);
  EXPECT_EQ(f.size(), 100);
  EXPECT_LT((f + models.pca.components * models.pca.mean).norm(), 1e-12);
}

// Dice coefficient over multisets computed from explicit counts.
double dice_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, int> ca, cb;
  for (const auto& s : a) ++ca[s];
  for (const auto& s : b) ++cb[s];
  int common = 0;
  for (const auto& [k, n] : ca) common += std::min(n, cb.count(k) ? cb[k] : 0);
  return a.empty() && b.empty() ? 0.0 : 2.0 * common / static_cast<double>(a.size() + b.size());
}

TEST(Harmonic, MatchesMultisetDice) {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> a, b;
    for (std::size_t i = 0, n = rng.index(5); i < n; ++i) a.push_back(std::string(1, char('a' + rng.index(3))));
    for (std::size_t i = 0, n = rng.index(5); i < n; ++i) b.push_back(std::string(1, char('a' + rng.index(3))));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_DOUBLE_EQ(harmonic_similarity(a, b), dice_oracle(a, b));
  }
  EXPECT_DOUBLE_EQ(harmonic_similarity({"a", "b"}, {"a", "b"}), 1.0);
}

TEST(Comparative, PositionBlock) {
  const Document doc = make_doc("d", "1", {"a", "b", "c", "d", "e"}, {{0}, {1}, {2}, {3}, {4}});
  const Document solo = make_doc("s", "1", {"a", "q"}, {{1}});
  const MentionPool pool({&doc, &solo});
  const Eigen::VectorXd third = pool.comparative_features(2);
  EXPECT_DOUBLE_EQ(third[0], 0.0);
  EXPECT_DOUBLE_EQ(third[1], 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(third[2], 0.0);
  const Eigen::VectorXd only = pool.comparative_features(5);
  EXPECT_DOUBLE_EQ(only[0], 1.0);
  EXPECT_DOUBLE_EQ(only[1], 1.0);
  EXPECT_DOUBLE_EQ(only[2], 1.0);
  EXPECT_DOUBLE_EQ(only[3], 0.0);
  EXPECT_DOUBLE_EQ(only[4], 0.0);
}

TEST(Comparative, AveragesExcludeSelf) {
  const Document d1 = make_doc("d1", "1", {"Go", "go", "stop"}, {{0}, {1}, {2}});
  const Document d2 = make_doc("d2", "1", {"go"}, {{0}});
  const MentionPool pool({&d1, &d2});
  const Eigen::VectorXd f = pool.comparative_features(0);  // "Go", lemma "go"
  // Same doc: words {go, stop} -> 0, 0; lemmas -> 1, 0.
  EXPECT_DOUBLE_EQ(f[3], 0.0);
  EXPECT_DOUBLE_EQ(f[4], 0.5);
  // Pool adds d2's "go": words 0/3, lemmas 2/3.
  EXPECT_DOUBLE_EQ(f[5], 0.0);
  EXPECT_DOUBLE_EQ(f[6], 2.0 / 3.0);
}

TEST(Assemble, Dimension) {
  EXPECT_EQ(feature_dimension(4), 4139u);
  EXPECT_EQ(feature_dimension(300), 6507u);
}

TEST(Assemble, ExtractWidthOrderAndPurity) {
  std::vector<Document> docs;
  for (int d = 0; d < 4; ++d) {
    docs.push_back(make_doc("d" + std::to_string(d), std::to_string(d % 2), {"run", "fast", "ran", "x", "run"},
                            {{0}, {2, 3}, {4}}, {0, 0, 1, 1, 1}));
  }
  const Corpus c(docs);
  WordVectors wv(4);
  wv.add("run", std::vector<double>{1, 2, 3, 4});
  wv.add("ran", std::vector<double>{0, 1, 0, 1});
  const FeatureModels models = fit_feature_models(c);
  const FeatureExtractor ex(wv, models);
  const Eigen::MatrixXd f = ex.extract(c);
  EXPECT_EQ(f.rows(), 12);
  EXPECT_EQ(f.cols(), 4139);
  EXPECT_TRUE(f.allFinite());
  EXPECT_EQ(f, ex.extract(c));
  // Identical mentions in identical contexts get identical rows, except the
  // comparative pool averages which also match here because documents repeat.
  EXPECT_EQ(f.row(0), f.row(3));
  // Layout: document block right after the contextual blocks.
  const Eigen::VectorXd doc0 = doc_features(c.documents()[0], models.tfidf, models.pca);
  EXPECT_LT((f.row(0).segment(8 * 504, 100).transpose() - doc0).norm(), 1e-12);
  EXPECT_DOUBLE_EQ(f(1, 8 * 504 + 100 + 1), 2.0 / 3.0);
}

TEST(Assemble, TopicPoolingChangesOnlyPoolAverages) {
  std::vector<Document> docs;
  docs.push_back(make_doc("a", "1", {"run", "x"}, {{0}}));
  docs.push_back(make_doc("b", "1", {"run", "y"}, {{0}}));
  docs.push_back(make_doc("c", "2", {"walk", "z"}, {{0}}));
  const Corpus c(docs);
  WordVectors wv(1);
  const FeatureModels models = fit_feature_models(c);
  const FeatureExtractor ex(wv, models);
  const Eigen::MatrixXd global = ex.extract(c, PoolScope::kGlobal);
  const Eigen::MatrixXd topic = ex.extract(c, PoolScope::kTopic);
  const Eigen::Index pool_word = static_cast<Eigen::Index>(feature_dimension(1)) - 2;
  EXPECT_DOUBLE_EQ(global(0, pool_word), 0.5);
  EXPECT_DOUBLE_EQ(topic(0, pool_word), 1.0);
  EXPECT_EQ(global.leftCols(pool_word), topic.leftCols(pool_word));
}

TEST(ModelFiles, RoundTrip) {
  testing::TempDir dir("features");
  const Corpus c({make_doc("a", "1", {"x", "y", "y"}, {}), make_doc("b", "1", {"y", "z"}, {}),
                  make_doc("c", "1", {"x", "w"}, {})});
  const FeatureModels m = fit_feature_models(c);
  const Stamp stamp{0xabcdef, 42};
  save_lemma_vocab(dir / "vocab.txt", m.vocab, stamp);
  save_tfidf(dir / "tfidf.tsv", m.tfidf, stamp);
  save_pca(dir / "pca.mat", m.pca, stamp);
  Stamp read;
  EXPECT_EQ(load_lemma_vocab(dir / "vocab.txt", &read).index_of, m.vocab.index_of);
  EXPECT_EQ(read, stamp);
  const TfidfModel t = load_tfidf(dir / "tfidf.tsv", &read);
  EXPECT_EQ(read, stamp);
  EXPECT_EQ(t.lemma_index, m.tfidf.lemma_index);
  EXPECT_EQ(t.num_documents, 3u);
  EXPECT_EQ(t.idf, m.tfidf.idf);
  const PcaModel p = load_pca(dir / "pca.mat");
  EXPECT_EQ(p.mean, m.pca.mean);
  EXPECT_EQ(p.components, m.pca.components);
}

}  // namespace
}  // namespace evcore
