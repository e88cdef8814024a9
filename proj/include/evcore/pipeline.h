#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "evcore/corpus.h"
#include "evcore/features.h"
#include "evcore/scoring.h"
#include "evcore/stamp.h"
#include "evcore/trainer.h"

namespace evcore {

enum class Variant { kCce, kCore, kCoreCce, kCoreCceLemma, kLemma, kLemmaDelta, kUnsupervised };

// Display names: CCE, CORE, CORE+CCE, CORE+CCE+LEMMA, LEMMA, LEMMA-DELTA, UNSUPERVISED.
std::string_view variant_name(Variant variant);
// File-name form: cce, core, core-cce, ...
std::string_view variant_slug(Variant variant);
// Accepts the display name or the slug, case-insensitively.
Variant parse_variant(const std::string& text);
bool is_learned(Variant variant);
bool uses_lemmas(Variant variant);

enum class ScoreMode { kCombined, kWithinDoc };
ScoreMode parse_score_mode(const std::string& text);

enum class EvalSplit { kValidation, kTest };

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path vectors;
  std::filesystem::path output;
  TopicSplit split = TopicSplit::ecb_plus_default();
  PoolScope pool = PoolScope::kGlobal;
  Variant variant = Variant::kCoreCce;
  TrainConfig train;
  std::optional<double> tau;
  std::optional<double> delta;
  EvalSplit eval_split = EvalSplit::kTest;
  ScoreMode mode = ScoreMode::kCombined;

  // Set when the config file (or a flag) provided the value explicitly.
  bool lr_set = false;
  bool lambda_set = false;

  // Normalizes variant-dependent defaults and checks variant-specific fields.
  // CORE alone trains at a tenth of the learning rate and without CCE; CCE
  // rejects nonzero lambdas.
  void finalize();

  // Key = value rendering of every setting except the output directory.
  std::string canonical() const;
  std::uint64_t hash() const;
  Stamp stamp() const { return Stamp{hash(), train.seed}; }
};

// INI-style text: [paths], [split], [model], [train], [cluster], [score]
// sections of key = value lines. Relative paths resolve against base_dir.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {},
                           const std::string& source_name = "<stream>");
RunConfig load_run_config(const std::filesystem::path& path);

// Output layout under config.output.
struct ArtifactPaths {
  std::filesystem::path root;

  std::filesystem::path features_dir() const { return root / "features"; }
  std::filesystem::path matrix(std::string_view split) const;
  std::filesystem::path mention_ids(std::string_view split) const;
  std::filesystem::path gold(std::string_view split) const;
  std::filesystem::path vocab() const { return features_dir() / "vocab.txt"; }
  std::filesystem::path tfidf() const { return features_dir() / "tfidf.tsv"; }
  std::filesystem::path pca() const { return features_dir() / "pca.mat"; }
  std::filesystem::path checkpoint(Variant variant) const;
  std::filesystem::path train_log(Variant variant) const;
  std::filesystem::path chains(Variant variant, std::string_view split) const;
  std::filesystem::path cluster_params(Variant variant, std::string_view split) const;
  std::filesystem::path report(Variant variant, std::string_view split, ScoreMode mode) const;
};

std::string_view split_name(EvalSplit split);

// Each stage reads what the previous one wrote. Progress goes to log when
// non-null.
void cmd_features(const RunConfig& config, std::ostream* log = nullptr);
TrainResult cmd_train(const RunConfig& config, std::ostream* log = nullptr);
Clustering cmd_cluster(const RunConfig& config, std::ostream* log = nullptr);

// Scores sys against gold. Within-doc mode needs the corpus for document
// membership. The report goes to report_path when non-empty.
MetricReport cmd_score(const std::filesystem::path& gold, const std::filesystem::path& sys, ScoreMode mode,
                       const Corpus* corpus, const std::filesystem::path& report_path = {},
                       const Stamp* stamp = nullptr);

// features -> train (learned variants) -> cluster -> score.
MetricReport cmd_pipeline(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace evcore
