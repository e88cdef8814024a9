#include "evcore/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "evcore/errors.h"
#include "evcore/rng.h"

namespace evcore {

namespace {

const char* const kSuffixes[] = {"", "s", "ed", "ing"};
const char* const kModifiers[] = {"up", "into", "out", "over"};
const char* const kGeneric[] = {"the", "a", "of", "to", "and", "in", "on", "was", "by", "with"};

struct PlannedMention {
  std::size_t chain;
  std::size_t lemma;
  bool two_tokens;
};

}  // namespace

SyntheticData make_synthetic(const SyntheticOptions& opt) {
  if (opt.topics == 0 || opt.documents < opt.topics || opt.chains == 0 || opt.head_lemmas == 0) {
    throw ConfigError("synthetic corpus needs topics, documents per topic, chains and lemmas");
  }
  const std::size_t multi = opt.chains - std::min(opt.singleton_chains, opt.chains);
  if (opt.mentions < opt.chains + multi) throw ConfigError("too few mentions for the requested chains");
  Rng rng(opt.seed);

  std::vector<std::size_t> chain_size(opt.chains, 1);
  for (std::size_t c = 0; c < multi; ++c) ++chain_size[c];
  for (std::size_t extra = opt.mentions - opt.chains - multi; extra > 0 && multi > 0; --extra) {
    ++chain_size[rng.index(multi)];
  }
  std::vector<std::size_t> chain_lemma(opt.chains);
  for (auto& lemma : chain_lemma) lemma = rng.index(opt.head_lemmas);

  const std::size_t docs_per_topic = opt.documents / opt.topics;
  std::vector<std::vector<PlannedMention>> planned(docs_per_topic * opt.topics);
  for (std::size_t c = 0; c < opt.chains; ++c) {
    const std::size_t topic = c % opt.topics;
    for (std::size_t k = 0; k < chain_size[c]; ++k) {
      const std::size_t doc = topic * docs_per_topic + rng.index(docs_per_topic);
      std::size_t lemma = chain_lemma[c];
      if (rng.bernoulli(opt.lemma_switch_rate)) lemma = rng.index(opt.head_lemmas);
      planned[doc].push_back(PlannedMention{c, lemma, rng.bernoulli(0.3)});
    }
  }

  std::vector<Document> docs;
  std::size_t mention_counter = 0;
  for (std::size_t d = 0; d < planned.size(); ++d) {
    const std::size_t topic = d / docs_per_topic;
    Document doc;
    doc.topic_id = std::to_string(topic + 1);
    doc.doc_id = doc.topic_id + "_" + std::to_string(d % docs_per_topic + 1);
    std::size_t sentence = 0;
    auto add_token = [&](const std::string& word, const std::string& lemma) {
      doc.tokens.push_back(Token{doc.tokens.size(), sentence, word, lemma});
    };
    auto filler = [&](std::size_t count) {
      for (std::size_t i = 0; i < count; ++i) {
        if (rng.bernoulli(0.5)) {
          const std::string w = kGeneric[rng.index(std::size(kGeneric))];
          add_token(w, w);
        } else {
          const std::string w = "t" + doc.topic_id + "w" + std::to_string(rng.index(12));
          add_token(w, w);
        }
      }
    };
    // Opening sentence so early mentions have predecessors.
    filler(4 + rng.index(4));
    ++sentence;
    for (const PlannedMention& pm : planned[d]) {
      filler(2 + rng.index(5));
      Mention m;
      char id[32];
      std::snprintf(id, sizeof(id), "m%04zu", mention_counter++);
      m.id = id;
      m.doc_id = doc.doc_id;
      m.gold_chain = "c" + std::to_string(pm.chain);
      if (pm.two_tokens) {
        m.token_indices.push_back(doc.tokens.size());
        const std::string mod = kModifiers[rng.index(std::size(kModifiers))];
        add_token(mod, mod);
      }
      const std::string lemma = "act" + std::to_string(pm.lemma);
      m.token_indices.push_back(doc.tokens.size());
      add_token(lemma + kSuffixes[rng.index(std::size(kSuffixes))], lemma);
      if (rng.bernoulli(0.7)) {
        const std::string arg = "c" + std::to_string(pm.chain) + "x" + std::to_string(rng.index(3));
        add_token(arg, arg);
      }
      doc.mentions.push_back(std::move(m));
      filler(2 + rng.index(5));
      ++sentence;
    }
    filler(3);
    docs.push_back(std::move(doc));
  }

  SyntheticData out;
  out.corpus = Corpus(std::move(docs));
  const std::size_t n_train = std::max<std::size_t>(1, opt.topics / 2);
  const std::size_t n_val = std::max<std::size_t>(1, opt.topics / 3);
  for (std::size_t t = 1; t <= opt.topics; ++t) {
    TopicSet& set = t <= n_train ? out.split.train : (t <= n_train + n_val ? out.split.validation : out.split.test);
    set.insert(std::to_string(t));
  }

  // Features: informative chain prototype block + dominant noise block.
  const auto k = static_cast<Eigen::Index>(opt.informative_dims);
  const auto z = static_cast<Eigen::Index>(opt.noise_dims);
  Eigen::MatrixXd prototypes(static_cast<Eigen::Index>(opt.chains), k);
  for (Eigen::Index r = 0; r < prototypes.rows(); ++r) {
    for (Eigen::Index c = 0; c < k; ++c) prototypes(r, c) = rng.normal();
  }
  const double shared_weight = std::sqrt(opt.document_share);
  const double own_weight = std::sqrt(1.0 - opt.document_share);
  std::map<std::string, Eigen::VectorXd> doc_offset;
  for (const Document& doc : out.corpus.documents()) {
    Eigen::VectorXd v(z);
    for (Eigen::Index c = 0; c < z; ++c) v[c] = rng.normal();
    doc_offset.emplace(doc.doc_id, std::move(v));
  }
  const auto& mentions = out.corpus.mentions();
  out.features.resize(static_cast<Eigen::Index>(mentions.size()), k + z);
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const auto chain = static_cast<Eigen::Index>(std::stoul(mentions[i]->gold_chain.substr(1)));
    for (Eigen::Index c = 0; c < k; ++c) {
      out.features(r, c) = prototypes(chain, c) + opt.within_chain_spread * rng.normal();
    }
    const Eigen::VectorXd& shared = doc_offset.at(mentions[i]->doc_id);
    for (Eigen::Index c = 0; c < z; ++c) {
      out.features(r, k + c) =
          opt.noise_scale * (shared_weight * shared[c] + own_weight * rng.normal());
    }
  }
  return out;
}

WordVectors synthetic_word_vectors(const Corpus& corpus, std::size_t dimension, std::uint64_t seed) {
  Rng rng(seed);
  std::map<std::string, std::string> lemma_of;
  for (const Document& doc : corpus.documents()) {
    for (const Token& tok : doc.tokens) lemma_of.emplace(tok.word, tok.lemma);
  }
  std::map<std::string, std::vector<double>> base;
  WordVectors vectors(dimension);
  std::vector<double> v(dimension);
  for (const auto& [word, lemma] : lemma_of) {
    auto [it, inserted] = base.try_emplace(lemma, dimension);
    if (inserted) {
      for (double& x : it->second) x = rng.normal();
    }
    for (std::size_t i = 0; i < dimension; ++i) v[i] = it->second[i] + 0.1 * rng.normal();
    vectors.add(word, v);
  }
  return vectors;
}

SyntheticFiles write_synthetic_files(const SyntheticData& data, const std::filesystem::path& dir,
                                     std::size_t vector_dimension, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  SyntheticFiles files{dir / "corpus.tsv", dir / "vectors.txt", dir / "run.ini"};
  save_corpus(files.corpus, data.corpus);

  const WordVectors vectors = synthetic_word_vectors(data.corpus, vector_dimension, seed);
  std::set<std::string> words;
  for (const Document& doc : data.corpus.documents()) {
    for (const Token& tok : doc.tokens) words.insert(tok.word);
  }
  std::ofstream vec(files.vectors);
  if (!vec) throw InputError("cannot write " + files.vectors.string());
  vec.precision(10);
  vec << words.size() << ' ' << vector_dimension << '\n';
  for (const auto& word : words) {
    vec << word;
    for (double x : vectors.lookup(word)) vec << ' ' << x;
    vec << '\n';
  }

  std::ofstream ini(files.config);
  if (!ini) throw InputError("cannot write " + files.config.string());
  ini << "[paths]\ncorpus = corpus.tsv\nvectors = vectors.txt\noutput = out\n\n"
      << "[split]\ntrain = " << format_topic_list(data.split.train)
      << "\nvalidation = " << format_topic_list(data.split.validation)
      << "\ntest = " << format_topic_list(data.split.test) << "\n\n"
      << "[model]\nvariant = CORE+CCE\n\n"
      << "[train]\nepochs = 20\nlambda1 = 2\nlambda2 = 0\nseed = " << seed << "\nhidden = 128\nembedding = 32\n\n"
      << "[cluster]\nsplit = test\n\n"
      << "[score]\nmode = combined\n";
  return files;
}

}  // namespace evcore
