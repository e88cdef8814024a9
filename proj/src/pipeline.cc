#include "evcore/pipeline.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "evcore/checkpoint.h"
#include "evcore/clustering.h"
#include "evcore/errors.h"
#include "evcore/matrix_io.h"
#include "evcore/word_vectors.h"

namespace evcore {

namespace fs = std::filesystem;

namespace {

struct VariantInfo {
  Variant variant;
  const char* name;
  const char* slug;
};

constexpr VariantInfo kVariants[] = {
    {Variant::kCce, "CCE", "cce"},
    {Variant::kCore, "CORE", "core"},
    {Variant::kCoreCce, "CORE+CCE", "core-cce"},
    {Variant::kCoreCceLemma, "CORE+CCE+LEMMA", "core-cce-lemma"},
    {Variant::kLemma, "LEMMA", "lemma"},
    {Variant::kLemmaDelta, "LEMMA-DELTA", "lemma-delta"},
    {Variant::kUnsupervised, "UNSUPERVISED", "unsupervised"},
};

constexpr double kBaseLearningRate = 0.00085;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
}

std::size_t to_size(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used == text.size() && text.find('-') == std::string::npos) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError("'" + key + "' expects a non-negative integer, got '" + text + "'");
}

PoolScope parse_pool(const std::string& text) {
  const std::string t = lower(text);
  if (t == "global") return PoolScope::kGlobal;
  if (t == "topic") return PoolScope::kTopic;
  throw ConfigError("pool must be 'global' or 'topic', got '" + text + "'");
}

EvalSplit parse_eval_split(const std::string& text) {
  const std::string t = lower(text);
  if (t == "validation") return EvalSplit::kValidation;
  if (t == "test") return EvalSplit::kTest;
  throw ConfigError("cluster split must be 'validation' or 'test', got '" + text + "'");
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

void say(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n';
}

// Feature rows of one split with the mention id of each row.
struct SplitFeatures {
  Eigen::MatrixXd rows;
  std::vector<std::string> ids;
};

void save_ids(const fs::path& path, const std::vector<std::string>& ids, const Stamp& stamp) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << stamp.comment() << '\n';
  for (const auto& id : ids) out << id << '\n';
}

std::vector<std::string> load_ids(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string() + " (run the features stage first)");
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    ids.push_back(line);
  }
  return ids;
}

SplitFeatures load_split_features(const ArtifactPaths& paths, std::string_view split) {
  if (!fs::exists(paths.matrix(split))) {
    throw InputError("missing " + paths.matrix(split).string() + " (run the features stage first)");
  }
  SplitFeatures f{load_matrix(paths.matrix(split)), load_ids(paths.mention_ids(split))};
  if (static_cast<std::size_t>(f.rows.rows()) != f.ids.size()) {
    throw ModelMismatch(paths.matrix(split).string() + ": row count does not match its mention id list");
  }
  return f;
}

std::vector<std::string> mention_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  for (const Mention* m : corpus.mentions()) ids.push_back(m->id);
  return ids;
}

void check_rows_match(const SplitFeatures& f, const Corpus& corpus, std::string_view split) {
  if (f.ids != mention_ids(corpus)) {
    throw ModelMismatch("features for split '" + std::string(split) + "' do not match the corpus mentions");
  }
}

// Gold chain label per mention: index of the chain id in sorted order.
Labels chain_labels(const Corpus& corpus) {
  std::map<std::string, std::size_t> index;
  for (const Mention* m : corpus.mentions()) index.emplace(m->gold_chain, 0);
  std::size_t next = 0;
  for (auto& [chain, i] : index) i = next++;
  Labels out;
  for (const Mention* m : corpus.mentions()) out.push_back(index.at(m->gold_chain));
  return out;
}

// Pairs from different topics drop below every admissible threshold.
void restrict_to_topics(Eigen::MatrixXd& sims, const Corpus& corpus) {
  std::vector<const std::string*> topic;
  for (const Document& doc : corpus.documents()) {
    for (std::size_t k = 0; k < doc.mentions.size(); ++k) topic.push_back(&doc.topic_id);
  }
  for (Eigen::Index a = 0; a < sims.rows(); ++a) {
    for (Eigen::Index b = 0; b < sims.cols(); ++b) {
      if (*topic[static_cast<std::size_t>(a)] != *topic[static_cast<std::size_t>(b)]) sims(a, b) = -1.0;
    }
  }
}

Eigen::MatrixXd similarities(const Eigen::MatrixXd& rows, const Corpus& corpus, PoolScope pool) {
  Eigen::MatrixXd sims = cosine_similarity_matrix(rows);
  if (pool == PoolScope::kTopic) restrict_to_topics(sims, corpus);
  return sims;
}

Corpus corpus_for(const SplitCorpora& parts, std::string_view split) {
  if (split == "train") return parts.train;
  if (split == "validation") return parts.validation;
  return parts.test;
}

constexpr std::string_view kSplits[] = {"train", "validation", "test"};

void require_validation(const Corpus& validation, const char* what) {
  if (validation.mentions().empty()) {
    throw ConfigError(std::string(what) + " must be tuned on validation mentions, but the validation split is empty;"
                                          " set it in the [cluster] section");
  }
}

}  // namespace

std::string_view variant_name(Variant variant) {
  for (const auto& v : kVariants) {
    if (v.variant == variant) return v.name;
  }
  return "?";
}

std::string_view variant_slug(Variant variant) {
  for (const auto& v : kVariants) {
    if (v.variant == variant) return v.slug;
  }
  return "?";
}

Variant parse_variant(const std::string& text) {
  const std::string t = lower(text);
  for (const auto& v : kVariants) {
    if (t == lower(v.name) || t == v.slug) return v.variant;
  }
  throw ConfigError("unknown variant '" + text + "'");
}

bool is_learned(Variant variant) {
  return variant == Variant::kCce || variant == Variant::kCore || variant == Variant::kCoreCce ||
         variant == Variant::kCoreCceLemma;
}

bool uses_lemmas(Variant variant) {
  return variant == Variant::kLemma || variant == Variant::kLemmaDelta || variant == Variant::kCoreCceLemma;
}

ScoreMode parse_score_mode(const std::string& text) {
  const std::string t = lower(text);
  if (t == "combined") return ScoreMode::kCombined;
  if (t == "within-doc" || t == "within_doc" || t == "withindoc") return ScoreMode::kWithinDoc;
  throw ConfigError("score mode must be 'combined' or 'within-doc', got '" + text + "'");
}

std::string_view split_name(EvalSplit split) { return split == EvalSplit::kValidation ? "validation" : "test"; }

void RunConfig::finalize() {
  LossWeights& w = train.weights;
  switch (variant) {
    case Variant::kCce:
      if (lambda_set && (w.lambda1 != 0.0 || w.lambda2 != 0.0)) {
        throw ConfigError("variant CCE takes no lambda1/lambda2");
      }
      w = LossWeights{1.0, 0.0, 0.0};
      break;
    case Variant::kCore:
      w.cce = 0.0;
      if (!lambda_set) w.lambda1 = w.lambda2 = 2.0;
      break;
    case Variant::kCoreCce:
    case Variant::kCoreCceLemma:
      w.cce = 1.0;
      if (!lambda_set) {
        w.lambda1 = 2.0;
        w.lambda2 = 0.0;
      }
      break;
    default:
      break;
  }
  if (!lr_set) train.lr = variant == Variant::kCore ? kBaseLearningRate * 0.1 : kBaseLearningRate;

  if (!(train.lr > 0.0)) throw ConfigError("lr must be positive");
  if (train.epochs == 0) throw ConfigError("epochs must be at least 1");
  if (train.batch_size < 3) throw ConfigError("batch_size must be at least 3");
  if (train.dropout < 0.0 || train.dropout >= 1.0) throw ConfigError("dropout must be in [0, 1)");
  if (train.hidden == 0 || train.embedding == 0) throw ConfigError("hidden and embedding widths must be positive");
  if (w.lambda1 < 0.0 || w.lambda2 < 0.0) throw ConfigError("lambda1 and lambda2 must be non-negative");
  if (tau && (*tau < 0.0 || *tau > 1.0)) throw ConfigError("tau must be in [0, 1]");
  if (delta && (*delta < 0.0 || *delta > 1.0)) throw ConfigError("delta must be in [0, 1]");
  for (const TopicSet* a : {&split.train, &split.validation}) {
    for (const TopicSet* b : {&split.validation, &split.test}) {
      if (a == b) continue;
      for (const auto& t : *a) {
        if (b->count(t)) throw ConfigError("topic " + t + " appears in more than one split");
      }
    }
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "corpus=" << corpus.string() << '\n'
      << "vectors=" << vectors.string() << '\n'
      << "split.train=" << format_topic_list(split.train) << '\n'
      << "split.validation=" << format_topic_list(split.validation) << '\n'
      << "split.test=" << format_topic_list(split.test) << '\n'
      << "pool=" << (pool == PoolScope::kGlobal ? "global" : "topic") << '\n'
      << "variant=" << variant_name(variant) << '\n'
      << "lr=" << format_double(train.lr) << '\n'
      << "epochs=" << train.epochs << '\n'
      << "batch_size=" << train.batch_size << '\n'
      << "cce=" << format_double(train.weights.cce) << '\n'
      << "lambda1=" << format_double(train.weights.lambda1) << '\n'
      << "lambda2=" << format_double(train.weights.lambda2) << '\n'
      << "dropout=" << format_double(train.dropout) << '\n'
      << "seed=" << train.seed << '\n'
      << "hidden=" << train.hidden << '\n'
      << "embedding=" << train.embedding << '\n'
      << "tau=" << (tau ? format_double(*tau) : "tuned") << '\n'
      << "delta=" << (delta ? format_double(*delta) : "tuned") << '\n'
      << "cluster.split=" << split_name(eval_split) << '\n'
      << "mode=" << (mode == ScoreMode::kCombined ? "combined" : "within-doc") << '\n';
  return out.str();
}

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

RunConfig parse_run_config(std::istream& in, const fs::path& base_dir, const std::string& source_name) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(source_name, e.line(), e.message());
  }

  RunConfig config;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(source_name + ": key '" + section + "' must sit inside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string value = node.data();
      const std::string where = section + "." + key;
      if (section == "paths" && key == "corpus") {
        config.corpus = resolve(value);
      } else if (section == "paths" && key == "vectors") {
        config.vectors = resolve(value);
      } else if (section == "paths" && key == "output") {
        config.output = resolve(value);
      } else if (section == "split" && key == "train") {
        config.split.train = parse_topic_list(value);
      } else if (section == "split" && key == "validation") {
        config.split.validation = parse_topic_list(value);
      } else if (section == "split" && key == "test") {
        config.split.test = parse_topic_list(value);
      } else if (section == "split" && key == "pool") {
        config.pool = parse_pool(value);
      } else if (section == "model" && key == "variant") {
        config.variant = parse_variant(value);
      } else if (section == "train" && key == "lr") {
        config.train.lr = to_double(where, value);
        config.lr_set = true;
      } else if (section == "train" && key == "epochs") {
        config.train.epochs = to_size(where, value);
      } else if (section == "train" && key == "batch_size") {
        config.train.batch_size = to_size(where, value);
      } else if (section == "train" && key == "lambda1") {
        config.train.weights.lambda1 = to_double(where, value);
        config.lambda_set = true;
      } else if (section == "train" && key == "lambda2") {
        config.train.weights.lambda2 = to_double(where, value);
        config.lambda_set = true;
      } else if (section == "train" && key == "dropout") {
        config.train.dropout = to_double(where, value);
      } else if (section == "train" && key == "seed") {
        config.train.seed = to_size(where, value);
      } else if (section == "train" && key == "hidden") {
        config.train.hidden = to_size(where, value);
      } else if (section == "train" && key == "embedding") {
        config.train.embedding = to_size(where, value);
      } else if (section == "cluster" && key == "split") {
        config.eval_split = parse_eval_split(value);
      } else if (section == "cluster" && key == "tau") {
        config.tau = to_double(where, value);
      } else if (section == "cluster" && key == "delta") {
        config.delta = to_double(where, value);
      } else if (section == "score" && key == "mode") {
        config.mode = parse_score_mode(value);
      } else {
        throw ConfigError(source_name + ": unknown setting '" + where + "'");
      }
    }
  }
  config.finalize();
  return config;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  return parse_run_config(in, path.parent_path(), path.string());
}

fs::path ArtifactPaths::matrix(std::string_view split) const {
  return features_dir() / (std::string(split) + ".mat");
}

fs::path ArtifactPaths::mention_ids(std::string_view split) const {
  return features_dir() / (std::string(split) + ".mentions.tsv");
}

fs::path ArtifactPaths::gold(std::string_view split) const {
  return features_dir() / ("gold." + std::string(split) + ".chains");
}

fs::path ArtifactPaths::checkpoint(Variant variant) const {
  return root / "train" / std::string(variant_slug(variant)) / "checkpoint.bin";
}

fs::path ArtifactPaths::train_log(Variant variant) const {
  return root / "train" / std::string(variant_slug(variant)) / "log.tsv";
}

fs::path ArtifactPaths::chains(Variant variant, std::string_view split) const {
  return root / "cluster" / (std::string(variant_slug(variant)) + "." + std::string(split) + ".chains");
}

fs::path ArtifactPaths::cluster_params(Variant variant, std::string_view split) const {
  return root / "cluster" / (std::string(variant_slug(variant)) + "." + std::string(split) + ".params.tsv");
}

fs::path ArtifactPaths::report(Variant variant, std::string_view split, ScoreMode mode) const {
  return root / "score" /
         (std::string(variant_slug(variant)) + "." + std::string(split) + "." +
          (mode == ScoreMode::kCombined ? "combined" : "within-doc") + ".tsv");
}

void cmd_features(const RunConfig& config, std::ostream* log) {
  if (config.corpus.empty()) throw ConfigError("no corpus path configured ([paths] corpus)");
  if (config.vectors.empty()) throw ConfigError("no word vector path configured ([paths] vectors)");
  if (config.output.empty()) throw ConfigError("no output directory configured ([paths] output)");
  if (!fs::exists(config.vectors)) throw InputError("word vector file not found: " + config.vectors.string());

  const Corpus corpus = load_corpus(config.corpus);
  const SplitCorpora parts = split_by_topics(corpus, config.split);
  if (parts.train.mentions().empty()) throw InputError("the train split has no mentions");

  std::unordered_set<std::string> words;
  for (const Document& doc : corpus.documents()) {
    for (const Token& tok : doc.tokens) words.insert(tok.word);
  }
  const WordVectors vectors = load_word_vectors(config.vectors, &words);
  say(log, "features: " + std::to_string(vectors.size()) + " of " + std::to_string(words.size()) +
               " corpus words have vectors (dimension " + std::to_string(vectors.dimension()) + ")");

  const FeatureModels models = fit_feature_models(parts.train);
  const FeatureExtractor extractor(vectors, models);
  const ArtifactPaths paths{config.output};
  ensure_dir(paths.features_dir());
  const Stamp stamp = config.stamp();
  for (std::string_view split : kSplits) {
    const Corpus part = corpus_for(parts, split);
    const Eigen::MatrixXd rows =
        part.mentions().empty() ? Eigen::MatrixXd(0, static_cast<Eigen::Index>(extractor.dimension()))
                                : extractor.extract(part, config.pool);
    save_matrix(paths.matrix(split), rows, stamp);
    save_ids(paths.mention_ids(split), mention_ids(part), stamp);
    save_chains(paths.gold(split), gold_clustering(part), &stamp);
    say(log, "features: " + std::string(split) + " " + std::to_string(rows.rows()) + " x " +
                 std::to_string(rows.cols()));
  }
  save_lemma_vocab(paths.vocab(), models.vocab, stamp);
  save_tfidf(paths.tfidf(), models.tfidf, stamp);
  save_pca(paths.pca(), models.pca, stamp);
}

TrainResult cmd_train(const RunConfig& config, std::ostream* log) {
  if (!is_learned(config.variant)) {
    throw ConfigError("variant " + std::string(variant_name(config.variant)) + " has no training stage");
  }
  const ArtifactPaths paths{config.output};
  const Corpus corpus = load_corpus(config.corpus);
  const SplitCorpora parts = split_by_topics(corpus, config.split);
  const SplitFeatures train_rows = load_split_features(paths, "train");
  const SplitFeatures val_rows = load_split_features(paths, "validation");
  check_rows_match(train_rows, parts.train, "train");
  check_rows_match(val_rows, parts.validation, "validation");

  const LabelScheme scheme(parts.train);
  TrainData data{train_rows.rows, {}, chain_labels(parts.train), scheme.num_classes()};
  for (const Mention* m : parts.train.mentions()) data.labels.push_back(scheme.label_of(m->gold_chain));
  const ValidationData validation{val_rows.rows, chain_labels(parts.validation)};

  const fs::path log_path = paths.train_log(config.variant);
  ensure_dir(log_path.parent_path());
  std::ofstream epoch_log(log_path);
  if (!epoch_log) throw InputError("cannot write " + log_path.string());
  const Stamp stamp = config.stamp();
  epoch_log << stamp.comment() << '\n' << "epoch\ttotal\tcce\tattract\trepulse\tvalidation_b3\ttau\n";
  say(log, "train: " + std::string(variant_name(config.variant)) + ", " + std::to_string(train_rows.rows.rows()) +
               " mentions, " + std::to_string(scheme.num_classes()) + " classes");

  auto on_epoch = [&](const EpochRecord& r) {
    char line[256];
    std::snprintf(line, sizeof(line), "%zu\t%.6f\t%.6f\t%.6f\t%.6f\t%.4f\t%.4f", r.epoch, r.mean_loss.total,
                  r.mean_loss.cce, r.mean_loss.attract, r.mean_loss.repulse, r.validation_b3, r.tau);
    epoch_log << line << '\n';
    say(log, std::string("train: ") + line);
  };
  const TrainResult result =
      train(data, val_rows.ids.empty() ? nullptr : &validation, config.train, on_epoch);

  Checkpoint ckpt{result.params, result.adam, result.best_epoch, config.train.seed, stamp.config_hash,
                  result.best_tau, result.best_b3};
  save_checkpoint(paths.checkpoint(config.variant), ckpt);
  say(log, "train: kept epoch " + std::to_string(result.best_epoch) + " (validation B3 " +
               format_double(result.best_b3) + ", tau " + format_double(result.best_tau) + ")");
  return result;
}

Clustering cmd_cluster(const RunConfig& config, std::ostream* log) {
  const ArtifactPaths paths{config.output};
  const std::string_view split = split_name(config.eval_split);
  const Corpus corpus = load_corpus(config.corpus);
  const SplitCorpora parts = split_by_topics(corpus, config.split);
  const Corpus& eval = config.eval_split == EvalSplit::kValidation ? parts.validation : parts.test;
  const Corpus& val = parts.validation;
  const SplitFeatures eval_rows = load_split_features(paths, split);
  check_rows_match(eval_rows, eval, split);
  const Labels val_gold = chain_labels(val);

  std::optional<SplitFeatures> val_rows;
  auto validation_rows = [&]() -> const SplitFeatures& {
    if (!val_rows) {
      val_rows = load_split_features(paths, "validation");
      check_rows_match(*val_rows, val, "validation");
    }
    return *val_rows;
  };
  std::optional<TfidfModel> tfidf;
  auto lemmas = [&](const Corpus& c) {
    if (!tfidf) tfidf = load_tfidf(paths.tfidf());
    return lemma_context(c, *tfidf);
  };

  Labels labels;
  std::optional<double> tau = config.tau;
  std::optional<double> delta = config.delta;
  if (is_learned(config.variant)) {
    const fs::path ckpt_path = paths.checkpoint(config.variant);
    if (!fs::exists(ckpt_path)) throw InputError("missing checkpoint " + ckpt_path.string() + " (run train first)");
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    if (ckpt.params.shape().input != static_cast<std::size_t>(eval_rows.rows.cols())) {
      throw ModelMismatch("checkpoint expects " + std::to_string(ckpt.params.shape().input) +
                          "-dimensional features, found " + std::to_string(eval_rows.rows.cols()));
    }
    const Eigen::MatrixXd sims = similarities(embed(ckpt.params, eval_rows.rows), eval, config.pool);
    if (config.variant == Variant::kCoreCceLemma) {
      if (!tau || !delta) {
        require_validation(val, "tau/delta");
        const Eigen::MatrixXd val_sims =
            similarities(embed(ckpt.params, validation_rows().rows), val, config.pool);
        const std::vector<double> grid = delta ? std::vector<double>{*delta} : delta_grid();
        const DeltaSearch search = tune_delta(lemmas(val), val_sims, val_gold, grid);
        delta = search.delta;
        if (!tau) tau = search.tau;
      }
      const Labels init = lemma_delta_init(lemmas(eval), *delta);
      labels = agglomerate(sims, *tau, &init);
    } else {
      if (!tau) tau = ckpt.tau;
      labels = agglomerate(sims, *tau);
    }
  } else if (config.variant == Variant::kUnsupervised) {
    if (!tau) {
      require_validation(val, "tau");
      const Eigen::MatrixXd val_sims = similarities(validation_rows().rows, val, config.pool);
      tau = tune_tau(Dendrogram(val_sims), val_gold).tau;
    }
    labels = agglomerate(similarities(eval_rows.rows, eval, config.pool), *tau);
  } else if (config.variant == Variant::kLemma) {
    labels = lemma_partition(lemmas(eval));
  } else {
    if (!delta) {
      require_validation(val, "delta");
      delta = tune_delta_baseline(lemmas(val), val_gold, delta_grid()).delta;
    }
    labels = lemma_delta_init(lemmas(eval), *delta);
  }

  const Clustering chains = to_clustering(eval_rows.ids, labels);
  const Stamp stamp = config.stamp();
  ensure_dir(paths.chains(config.variant, split).parent_path());
  save_chains(paths.chains(config.variant, split), chains, &stamp);
  std::ofstream params(paths.cluster_params(config.variant, split));
  if (!params) throw InputError("cannot write " + paths.cluster_params(config.variant, split).string());
  params << stamp.comment() << '\n' << "variant\t" << variant_name(config.variant) << '\n';
  if (tau) params << "tau\t" << format_double(*tau) << '\n';
  if (delta) params << "delta\t" << format_double(*delta) << '\n';
  params << "chains\t" << chains.chains.size() << '\n';
  std::string note = "cluster: " + std::string(variant_name(config.variant)) + " on " + std::string(split) + ", " +
                     std::to_string(chains.chains.size()) + " chains";
  if (tau) note += ", tau " + format_double(*tau);
  if (delta) note += ", delta " + format_double(*delta);
  say(log, note);
  return chains;
}

MetricReport cmd_score(const fs::path& gold_path, const fs::path& sys_path, ScoreMode mode, const Corpus* corpus,
                       const fs::path& report_path, const Stamp* stamp) {
  Clustering gold = load_chains(gold_path);
  Clustering sys = load_chains(sys_path);
  if (mode == ScoreMode::kWithinDoc) {
    if (!corpus) throw ConfigError("within-doc scoring needs the corpus for document membership");
    const auto docs = corpus->mention_documents();
    gold = within_doc_projection(gold, docs);
    sys = within_doc_projection(sys, docs);
  }
  const MetricReport result = report(gold, sys);
  if (!report_path.empty()) {
    ensure_dir(report_path.parent_path());
    std::ofstream out(report_path);
    if (!out) throw InputError("cannot write " + report_path.string());
    if (stamp) out << stamp->comment() << '\n';
    write_report(out, result);
  }
  return result;
}

MetricReport cmd_pipeline(const RunConfig& config, std::ostream* log) {
  cmd_features(config, log);
  if (is_learned(config.variant)) cmd_train(config, log);
  cmd_cluster(config, log);
  const ArtifactPaths paths{config.output};
  const std::string_view split = split_name(config.eval_split);
  const Corpus corpus = load_corpus(config.corpus);
  const Stamp stamp = config.stamp();
  return cmd_score(paths.gold(split), paths.chains(config.variant, split), config.mode, &corpus,
                   paths.report(config.variant, split, config.mode), &stamp);
}

}  // namespace evcore
