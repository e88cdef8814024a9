#include "evcore/corpus.h"

#include <sstream>

#include <gtest/gtest.h>

#include "evcore/errors.h"
#include "test_util.h"

namespace evcore {
namespace {

Corpus parse(const std::string& text) {
  std::istringstream in(text);
  return read_corpus(in, "test");
}

std::string doc_text(const std::string& doc, const std::string& topic, std::size_t tokens,
                     const std::vector<std::pair<std::string, std::string>>& mentions) {
  std::ostringstream out;
  out << "DOC\t" << doc << '\t' << topic << '\n';
  for (std::size_t i = 0; i < tokens; ++i) out << "TOK\t" << i << "\t0\tw" << i << "\tl" << i << '\n';
  std::size_t tok = 0;
  for (const auto& [id, chain] : mentions) out << "MEN\t" << id << '\t' << chain << '\t' << tok++ << '\n';
  return out.str();
}

TEST(Corpus, MinimalDocument) {
  const Corpus c = parse("DOC\td1\t1\nTOK\t0\t0\tHe\the\nTOK\t1\t0\tleft\tleave\nMEN\tm1\tc1\t1\n");
  ASSERT_EQ(c.size(), 1u);
  ASSERT_EQ(c.mentions().size(), 1u);
  EXPECT_EQ(c.mentions()[0]->id, "m1");
  EXPECT_EQ(c.mentions()[0]->last_token(), 1u);
  EXPECT_EQ(c.documents()[0].tokens[1].lemma, "leave");
}

TEST(Corpus, CommentsAndBlankLinesIgnored) {
  const Corpus c = parse("# header\n\nDOC\td1\t1\n# inside\nTOK\t0\t0\ta\ta\nMEN\tm1\tc\t0\n");
  EXPECT_EQ(c.mentions().size(), 1u);
}

TEST(Corpus, MentionBeyondDocumentIsIntegrityError) {
  EXPECT_THROW(parse("DOC\td\t1\nTOK\t0\t0\ta\ta\nTOK\t1\t0\tb\tb\nTOK\t2\t0\tc\tc\nMEN\tm\tc\t99\n"),
               IntegrityError);
}

TEST(Corpus, MalformedRecordNamesLine) {
  try {
    parse("DOC\td\t1\nTOK\t0\t0\ta\ta\nTOK\tx\t0\tb\tb\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Corpus, RecordBeforeDocIsParseError) { EXPECT_THROW(parse("TOK\t0\t0\ta\ta\n"), ParseError); }

TEST(Corpus, NonContiguousTokensRejected) {
  EXPECT_THROW(parse("DOC\td\t1\nTOK\t0\t0\ta\ta\nTOK\t2\t0\tb\tb\n"), Error);
}

TEST(Corpus, DuplicateMentionIdsRejected) {
  EXPECT_THROW(parse(doc_text("d1", "1", 2, {{"m", "a"}}) + doc_text("d2", "1", 2, {{"m", "b"}})), Error);
}

TEST(Corpus, MentionsSortedIntoDocumentOrder) {
  const Corpus c = parse("DOC\td\t1\nTOK\t0\t0\ta\ta\nTOK\t1\t0\tb\tb\nMEN\tm2\tc\t1\nMEN\tm1\tc\t0\n");
  EXPECT_EQ(c.mentions()[0]->id, "m1");
  EXPECT_EQ(c.mentions()[1]->id, "m2");
}

TEST(Corpus, RoundTripIsIdentical) {
  const Corpus c = parse(doc_text("d1", "1", 4, {{"m1", "a"}, {"m2", "b"}}) +
                         "DOC\td2\t2\nTOK\t0\t0\tx\tx\nTOK\t1\t1\ty\ty\nMEN\tm3\ta\t0,1\n" +
                         doc_text("empty", "2", 3, {}));
  std::ostringstream out;
  write_corpus(out, c);
  EXPECT_EQ(parse(out.str()), c);
  EXPECT_EQ(c.summary().documents, 3u);
  EXPECT_EQ(c.summary().chains, 2u);
}

TEST(Corpus, CopiesKeepValidMentionPointers) {
  Corpus a = parse(doc_text("d1", "1", 2, {{"m1", "a"}}));
  const Corpus b = a;
  a = Corpus();
  ASSERT_EQ(b.mentions().size(), 1u);
  EXPECT_EQ(b.mentions()[0]->id, "m1");
}

TEST(Split, TwoTopics) {
  const Corpus c = parse(doc_text("d1", "1", 2, {{"m1", "a"}}) + doc_text("d2", "2", 2, {{"m2", "b"}}));
  TopicSplit s;
  s.train = {"1"};
  s.test = {"2"};
  const SplitCorpora parts = split_by_topics(c, s);
  ASSERT_EQ(parts.train.size(), 1u);
  EXPECT_EQ(parts.train.documents()[0].topic_id, "1");
  ASSERT_EQ(parts.test.size(), 1u);
  EXPECT_EQ(parts.test.documents()[0].topic_id, "2");
  EXPECT_TRUE(parts.validation.empty());
}

TEST(Split, OverlapIsConfigError) {
  TopicSplit s;
  s.train = {"3", "4"};
  s.test = {"3"};
  EXPECT_THROW(split_by_topics(Corpus(), s), ConfigError);
}

TEST(Split, DefaultConfiguration) {
  const TopicSplit s = TopicSplit::ecb_plus_default();
  EXPECT_EQ(s.validation.size(), 8u);
  EXPECT_EQ(s.validation, (TopicSet{"2", "5", "12", "18", "21", "23", "34", "35"}));
  EXPECT_EQ(s.train.size(), 27u);
  EXPECT_EQ(s.test.size(), 10u);
  EXPECT_TRUE(s.test.count("36") && s.test.count("45"));
}

TEST(Split, DocumentsOutsideAllSetsDropped) {
  const Corpus c = parse(doc_text("d1", "1", 1, {}) + doc_text("d9", "9", 1, {}));
  TopicSplit s;
  s.train = {"1"};
  const SplitCorpora parts = split_by_topics(c, s);
  EXPECT_EQ(parts.train.size() + parts.validation.size() + parts.test.size(), 1u);
}

TEST(TopicList, RangesAndSingles) {
  EXPECT_EQ(parse_topic_list("1-3, 7"), (TopicSet{"1", "2", "3", "7"}));
  EXPECT_THROW(parse_topic_list("5-2"), ConfigError);
  EXPECT_EQ(parse_topic_list(format_topic_list({"1", "2", "3", "7"})), (TopicSet{"1", "2", "3", "7"}));
}

TEST(LabelScheme, OneMultiChainOneSingleton) {
  const LabelScheme s = LabelScheme::from_chains({"a", "a", "b"});
  EXPECT_EQ(s.num_chain_classes(), 1u);
  EXPECT_EQ(s.label_of("a"), 0u);
  EXPECT_EQ(s.label_of("b"), 1u);
}

TEST(LabelScheme, AllSingletons) {
  const LabelScheme s = LabelScheme::from_chains({"a", "b", "c"});
  EXPECT_EQ(s.num_chain_classes(), 0u);
  EXPECT_EQ(s.num_classes(), 1u);
  for (const char* c : {"a", "b", "c"}) EXPECT_EQ(s.label_of(c), 0u);
}

TEST(LabelScheme, TwoMultiChains) {
  const LabelScheme s = LabelScheme::from_chains({"a", "a", "b", "b", "c"});
  EXPECT_EQ(s.num_chain_classes(), 2u);
  EXPECT_EQ(s.label_of("c"), 2u);
  EXPECT_EQ(s.label_of("a"), 0u);
  EXPECT_EQ(s.label_of("b"), 1u);
}

TEST(LabelScheme, ClassCountProperty) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> chains;
    const std::size_t n = 1 + rng.index(40);
    for (std::size_t i = 0; i < n; ++i) chains.push_back("c" + std::to_string(rng.index(15)));
    std::map<std::string, int> count;
    for (const auto& c : chains) ++count[c];
    std::size_t multi = 0;
    for (const auto& [c, k] : count) multi += k >= 2;
    const LabelScheme s = LabelScheme::from_chains(chains);
    EXPECT_EQ(s.num_classes(), multi + 1);
    for (const auto& c : chains) {
      if (count[c] == 1) EXPECT_EQ(s.label_of(c), s.singleton_class());
      else EXPECT_LT(s.label_of(c), s.singleton_class());
    }
  }
}

TEST(GoldClustering, ChainSizes) {
  const Corpus c = parse(doc_text("d1", "1", 3, {{"m1", "a"}, {"m2", "a"}, {"m3", "b"}}));
  const Clustering g = gold_clustering(c).canonical();
  ASSERT_EQ(g.chains.size(), 2u);
  EXPECT_EQ(g.chains[0], (std::vector<std::string>{"m1", "m2"}));
  EXPECT_EQ(g.chains[1], (std::vector<std::string>{"m3"}));
  EXPECT_TRUE(gold_clustering(Corpus()).chains.empty());
}

TEST(GoldClustering, PartitionsMentionSet) {
  Rng rng(5);
  std::string text;
  std::size_t id = 0;
  for (int d = 0; d < 6; ++d) {
    std::vector<std::pair<std::string, std::string>> ms;
    for (std::size_t k = 0, n = rng.index(5); k < n; ++k) {
      ms.push_back({"m" + std::to_string(id++), "c" + std::to_string(rng.index(6))});
    }
    text += doc_text("d" + std::to_string(d), std::to_string(d % 2), 6, ms);
  }
  const Corpus c = parse(text);
  const Clustering g = gold_clustering(c);
  EXPECT_NO_THROW(check_partition(g));
  EXPECT_EQ(g.mention_count(), c.mentions().size());
}

}  // namespace
}  // namespace evcore
