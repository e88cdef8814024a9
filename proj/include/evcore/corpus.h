#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "evcore/chains.h"

namespace evcore {

struct Token {
  std::size_t index = 0;
  std::size_t sentence_id = 0;
  std::string word;
  std::string lemma;

  bool operator==(const Token&) const = default;
};

// An event action span. token_indices is non-empty and ascending.
struct Mention {
  std::string id;
  std::string doc_id;
  std::vector<std::size_t> token_indices;
  std::string gold_chain;

  std::size_t first_token() const { return token_indices.front(); }
  std::size_t last_token() const { return token_indices.back(); }

  bool operator==(const Mention&) const = default;
};

struct Document {
  std::string doc_id;
  std::string topic_id;
  std::vector<Token> tokens;
  std::vector<Mention> mentions;  // ordered by first token index

  bool operator==(const Document&) const = default;
};

struct CorpusSummary {
  std::size_t documents = 0;
  std::size_t topics = 0;
  std::size_t tokens = 0;
  std::size_t mentions = 0;
  std::size_t chains = 0;
  std::size_t singleton_chains = 0;
};

// Immutable collection of documents. The constructor checks every invariant
// (unique ids, contiguous token indices, valid spans) and sorts each
// document's mentions into document order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents);

  Corpus(const Corpus& other) : Corpus(other.documents_) {}
  Corpus& operator=(const Corpus& other);
  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  // Mentions across all documents, in document order then mention order.
  const std::vector<const Mention*>& mentions() const { return mentions_; }

  const Document& document(const std::string& doc_id) const;
  const Document* find_document(const std::string& doc_id) const;

  // Map from mention id to owning document id.
  std::map<std::string, std::string> mention_documents() const;

  CorpusSummary summary() const;

  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  void index();

  std::vector<Document> documents_;
  std::map<std::string, std::size_t> doc_index_;
  std::vector<const Mention*> mentions_;  // points into documents_
};

// Reads the tab-separated DOC/TOK/MEN record format.
Corpus read_corpus(std::istream& in, const std::string& source_name = "<stream>");
Corpus load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

using TopicSet = std::set<std::string>;

struct TopicSplit {
  TopicSet train;
  TopicSet validation;
  TopicSet test;

  // Train topics 1-35 minus the eight validation topics; test topics 36-45.
  static TopicSplit ecb_plus_default();
};

// Parses "1-35,40,x7" into {"1",...,"35","40","x7"}. Ranges need integer bounds.
TopicSet parse_topic_list(const std::string& spec);
std::string format_topic_list(const TopicSet& topics);

struct SplitCorpora {
  Corpus train;
  Corpus validation;
  Corpus test;
};

// Documents whose topic is in none of the sets are dropped. Overlapping sets
// throw ConfigError.
SplitCorpora split_by_topics(const Corpus& corpus, const TopicSplit& split);

// C+1 training classes: one per train chain with at least two mentions
// (chains ordered by id), plus a shared class C for all singletons.
class LabelScheme {
 public:
  LabelScheme() = default;
  explicit LabelScheme(const Corpus& train);
  // From the gold chain id of every train mention.
  static LabelScheme from_chains(const std::vector<std::string>& chain_ids);

  std::size_t num_chain_classes() const { return class_of_chain_.size(); }
  std::size_t num_classes() const { return class_of_chain_.size() + 1; }
  std::size_t singleton_class() const { return class_of_chain_.size(); }

  // Chains not seen as multi-mention train chains map to the singleton class.
  std::size_t label_of(const std::string& chain_id) const;
  const std::map<std::string, std::size_t>& class_of_chain() const { return class_of_chain_; }

 private:
  std::map<std::string, std::size_t> class_of_chain_;
};

LabelScheme build_label_scheme(const Corpus& train);

// One chain per distinct gold chain id.
Clustering gold_clustering(const Corpus& corpus);

}  // namespace evcore
