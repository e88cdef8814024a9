#include "evcore/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "evcore/errors.h"

namespace evcore {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

bool parse_size(const std::string& text, std::size_t& value) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end;
}

void validate_document(Document& doc) {
  if (doc.doc_id.empty()) throw IntegrityError("document with empty id");
  if (doc.topic_id.empty()) throw IntegrityError("document '" + doc.doc_id + "' has empty topic");
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& tok = doc.tokens[i];
    if (tok.index != i) {
      throw IntegrityError("document '" + doc.doc_id + "': token indices must be contiguous from 0, got " +
                           std::to_string(tok.index) + " at position " + std::to_string(i));
    }
    if (tok.lemma.empty()) {
      throw IntegrityError("document '" + doc.doc_id + "': token " + std::to_string(i) + " has empty lemma");
    }
  }
  for (Mention& m : doc.mentions) {
    if (m.doc_id.empty()) m.doc_id = doc.doc_id;
    if (m.doc_id != doc.doc_id) {
      throw IntegrityError("mention '" + m.id + "' claims document '" + m.doc_id + "' but is attached to '" +
                           doc.doc_id + "'");
    }
    if (m.token_indices.empty()) throw IntegrityError("mention '" + m.id + "' has no tokens");
    if (m.gold_chain.empty()) throw IntegrityError("mention '" + m.id + "' has empty chain id");
    for (std::size_t k = 0; k < m.token_indices.size(); ++k) {
      if (m.token_indices[k] >= doc.tokens.size()) {
        throw IntegrityError("mention '" + m.id + "' references token " + std::to_string(m.token_indices[k]) +
                             " but document '" + doc.doc_id + "' has " + std::to_string(doc.tokens.size()) +
                             " tokens");
      }
      if (k > 0 && m.token_indices[k] <= m.token_indices[k - 1]) {
        throw IntegrityError("mention '" + m.id + "' token indices are not strictly ascending");
      }
    }
  }
  std::stable_sort(doc.mentions.begin(), doc.mentions.end(),
                   [](const Mention& a, const Mention& b) { return a.first_token() < b.first_token(); });
}

}  // namespace

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  for (Document& doc : documents_) validate_document(doc);
  index();
}

Corpus& Corpus::operator=(const Corpus& other) {
  if (this != &other) {
    documents_ = other.documents_;
    index();
  }
  return *this;
}

void Corpus::index() {
  doc_index_.clear();
  mentions_.clear();
  std::set<std::string> mention_ids;
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const Document& doc = documents_[d];
    if (!doc_index_.emplace(doc.doc_id, d).second) {
      throw IntegrityError("duplicate document id '" + doc.doc_id + "'");
    }
    for (const Mention& m : doc.mentions) {
      if (!mention_ids.insert(m.id).second) throw IntegrityError("duplicate mention id '" + m.id + "'");
      mentions_.push_back(&m);
    }
  }
}

const Document* Corpus::find_document(const std::string& doc_id) const {
  auto it = doc_index_.find(doc_id);
  return it == doc_index_.end() ? nullptr : &documents_[it->second];
}

const Document& Corpus::document(const std::string& doc_id) const {
  const Document* doc = find_document(doc_id);
  if (!doc) throw IntegrityError("unknown document '" + doc_id + "'");
  return *doc;
}

std::map<std::string, std::string> Corpus::mention_documents() const {
  std::map<std::string, std::string> out;
  for (const Mention* m : mentions_) out.emplace(m->id, m->doc_id);
  return out;
}

CorpusSummary Corpus::summary() const {
  CorpusSummary s;
  s.documents = documents_.size();
  std::set<std::string> topics;
  std::map<std::string, std::size_t> chain_sizes;
  for (const Document& doc : documents_) {
    topics.insert(doc.topic_id);
    s.tokens += doc.tokens.size();
    for (const Mention& m : doc.mentions) ++chain_sizes[m.gold_chain];
  }
  s.topics = topics.size();
  s.mentions = mentions_.size();
  s.chains = chain_sizes.size();
  s.singleton_chains = static_cast<std::size_t>(
      std::count_if(chain_sizes.begin(), chain_sizes.end(), [](const auto& kv) { return kv.second == 1; }));
  return s;
}

Corpus read_corpus(std::istream& in, const std::string& source_name) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    const std::string& kind = fields[0];
    auto fail = [&](const std::string& what) { throw ParseError(source_name, line_no, what); };
    if (kind == "DOC") {
      if (fields.size() != 3) fail("DOC record needs 2 fields (doc_id, topic_id)");
      if (fields[1].empty() || fields[2].empty()) fail("DOC record has an empty field");
      docs.push_back(Document{fields[1], fields[2], {}, {}});
    } else if (kind == "TOK") {
      if (fields.size() != 5) fail("TOK record needs 4 fields (index, sentence_id, word, lemma)");
      if (docs.empty()) fail("TOK record before any DOC record");
      Token tok;
      if (!parse_size(fields[1], tok.index)) fail("bad token index '" + fields[1] + "'");
      if (!parse_size(fields[2], tok.sentence_id)) fail("bad sentence id '" + fields[2] + "'");
      tok.word = fields[3];
      tok.lemma = fields[4];
      if (tok.word.empty() || tok.lemma.empty()) fail("TOK record has an empty word or lemma");
      Document& doc = docs.back();
      if (tok.index != doc.tokens.size()) {
        fail("token index " + fields[1] + " is not contiguous (expected " + std::to_string(doc.tokens.size()) + ")");
      }
      doc.tokens.push_back(std::move(tok));
    } else if (kind == "MEN") {
      if (fields.size() != 4) fail("MEN record needs 3 fields (mention_id, chain_id, token indices)");
      if (docs.empty()) fail("MEN record before any DOC record");
      if (fields[1].empty() || fields[2].empty()) fail("MEN record has an empty id");
      Mention m;
      m.id = fields[1];
      m.gold_chain = fields[2];
      m.doc_id = docs.back().doc_id;
      std::istringstream idx(fields[3]);
      std::string item;
      while (std::getline(idx, item, ',')) {
        std::size_t value;
        if (!parse_size(item, value)) fail("bad token index '" + item + "' in mention");
        m.token_indices.push_back(value);
      }
      if (m.token_indices.empty()) fail("mention without token indices");
      docs.back().mentions.push_back(std::move(m));
    } else {
      fail("unknown record kind '" + kind + "'");
    }
  }
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open corpus file " + path.string());
  return read_corpus(in, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const Document& doc : corpus.documents()) {
    out << "DOC\t" << doc.doc_id << '\t' << doc.topic_id << '\n';
    for (const Token& tok : doc.tokens) {
      out << "TOK\t" << tok.index << '\t' << tok.sentence_id << '\t' << tok.word << '\t' << tok.lemma << '\n';
    }
    for (const Mention& m : doc.mentions) {
      out << "MEN\t" << m.id << '\t' << m.gold_chain << '\t';
      for (std::size_t k = 0; k < m.token_indices.size(); ++k) {
        if (k) out << ',';
        out << m.token_indices[k];
      }
      out << '\n';
    }
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write corpus file " + path.string());
  write_corpus(out, corpus);
}

TopicSplit TopicSplit::ecb_plus_default() {
  TopicSplit split;
  split.validation = parse_topic_list("2,5,12,18,21,23,34,35");
  for (const auto& t : parse_topic_list("1-35")) {
    if (!split.validation.count(t)) split.train.insert(t);
  }
  split.test = parse_topic_list("36-45");
  return split;
}

TopicSet parse_topic_list(const std::string& spec) {
  TopicSet out;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const std::size_t dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      std::size_t lo, hi;
      if (!parse_size(item.substr(0, dash), lo) || !parse_size(item.substr(dash + 1), hi) || lo > hi) {
        throw ConfigError("bad topic range '" + item + "'");
      }
      for (std::size_t t = lo; t <= hi; ++t) out.insert(std::to_string(t));
    } else {
      out.insert(item);
    }
  }
  return out;
}

std::string format_topic_list(const TopicSet& topics) {
  std::string out;
  for (const auto& t : topics) {
    if (!out.empty()) out += ',';
    out += t;
  }
  return out;
}

SplitCorpora split_by_topics(const Corpus& corpus, const TopicSplit& split) {
  auto check_disjoint = [](const TopicSet& a, const TopicSet& b, const char* names) {
    for (const auto& t : a) {
      if (b.count(t)) throw ConfigError(std::string("topic '") + t + "' appears in both " + names + " sets");
    }
  };
  check_disjoint(split.train, split.validation, "train and validation");
  check_disjoint(split.train, split.test, "train and test");
  check_disjoint(split.validation, split.test, "validation and test");

  std::vector<Document> train, validation, test;
  for (const Document& doc : corpus.documents()) {
    if (split.train.count(doc.topic_id)) {
      train.push_back(doc);
    } else if (split.validation.count(doc.topic_id)) {
      validation.push_back(doc);
    } else if (split.test.count(doc.topic_id)) {
      test.push_back(doc);
    }
  }
  return SplitCorpora{Corpus(std::move(train)), Corpus(std::move(validation)), Corpus(std::move(test))};
}

LabelScheme::LabelScheme(const Corpus& train) {
  std::vector<std::string> chains;
  for (const Mention* m : train.mentions()) chains.push_back(m->gold_chain);
  *this = from_chains(chains);
}

LabelScheme LabelScheme::from_chains(const std::vector<std::string>& chain_ids) {
  std::map<std::string, std::size_t> sizes;  // ordered by chain id
  for (const auto& chain : chain_ids) ++sizes[chain];
  LabelScheme scheme;
  for (const auto& [chain, size] : sizes) {
    if (size >= 2) scheme.class_of_chain_.emplace(chain, scheme.class_of_chain_.size());
  }
  return scheme;
}

std::size_t LabelScheme::label_of(const std::string& chain_id) const {
  auto it = class_of_chain_.find(chain_id);
  return it == class_of_chain_.end() ? singleton_class() : it->second;
}

LabelScheme build_label_scheme(const Corpus& train) { return LabelScheme(train); }

Clustering gold_clustering(const Corpus& corpus) {
  std::vector<std::string> ids;
  std::vector<std::string> chains;
  for (const Mention* m : corpus.mentions()) {
    ids.push_back(m->id);
    chains.push_back(m->gold_chain);
  }
  return clustering_from_labels(ids, chains);
}

}  // namespace evcore
